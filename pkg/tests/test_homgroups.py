import pytest

from chang.complexes import (cbot, ceta, cfull, ctop, dual_elementary, moore,
                             smash_atom, sphere, wedge)
from chang.homgroups import (UntabulatedHom, atom_homotopy, hom_group,
                             pi9_smash_extension, wedge_hom_order)

from conftest import PARAMS


def test_sphere_and_moore_entries():
    assert hom_group(sphere(5), sphere(5)).cyclic == (0,)
    assert hom_group(sphere(6), sphere(5)).cyclic == (2,)
    assert hom_group(sphere(8), sphere(5)).cyclic == (24,)
    assert hom_group(moore(2, 3, 5), sphere(5)).cyclic == (2,)
    assert hom_group(sphere(6), moore(2, 2, 5)).cyclic == (2,)
    # the r = t = 1 endomorphism group is one cyclic factor of order four
    assert hom_group(moore(2, 1, 5), moore(2, 1, 5)).cyclic == (4,)
    assert hom_group(moore(2, 2, 5), moore(2, 3, 5)).cyclic == (4, 2)
    d = hom_group(sphere(8), moore(2, 2, 5))
    assert d.cyclic == (4, 2)
    assert [g[0] for g in d.generators] == ["iϱ", "ρ_2"]
    d = hom_group(sphere(8), moore(2, 1, 5))
    assert d.cyclic == (2, 2)


def test_mixed_moore_dimension_entries():
    assert hom_group(moore(2, 1, 6), moore(2, 1, 5)).cyclic == (2, 2)
    assert hom_group(moore(2, 2, 6), moore(2, 1, 5)).cyclic == (4, 2)
    assert hom_group(moore(2, 1, 6), moore(2, 2, 5)).cyclic == (2, 4)
    assert hom_group(moore(2, 3, 6), moore(2, 2, 5)).cyclic == (2, 2, 2)
    assert hom_group(moore(2, 1, 6), sphere(5)).cyclic == (4,)
    assert hom_group(moore(2, 2, 6), sphere(5)).cyclic == (2, 2)


def test_chang_homotopy_and_cohomotopy():
    assert hom_group(sphere(7), cbot(2, 9)).cyclic == (4,)       # bottom class
    assert hom_group(sphere(8), cbot(2, 9)).group == ()          # pi_{k-1}
    assert hom_group(sphere(9), cbot(2, 9)).cyclic == (2, 0)     # pi_k
    assert hom_group(sphere(8), ctop(9, 3)).cyclic == (16,)
    assert hom_group(sphere(9), ctop(9, 3)).cyclic == (2,)
    assert hom_group(sphere(8), cfull(2, 9, 3)).cyclic == (16,)
    assert hom_group(sphere(9), cfull(2, 9, 3)).cyclic == (2, 2)
    assert hom_group(cbot(2, 9), sphere(7)).cyclic == (2,)
    assert hom_group(cbot(2, 9), sphere(8)).cyclic == (8,)
    assert hom_group(ctop(9, 2), sphere(8)).group == ()
    assert hom_group(cfull(2, 9, 3), sphere(9)).cyclic == (8,)
    assert hom_group(cfull(2, 9, 3), sphere(8)).cyclic == (8,)
    assert hom_group(cfull(2, 9, 3), sphere(7)).cyclic == (2, 2)


def test_atom_tables():
    for r in PARAMS:
        a = smash_atom(moore(2, r, 3), ceta(5))
        assert atom_homotopy(a, 7).group == ()
        assert atom_homotopy(a, 8).cyclic == (2 ** r,)
        assert atom_homotopy(a, 9).cyclic == ((2,) if r == 1 else (4,))
        assert hom_group(a, sphere(8)).group == ()
        assert hom_group(a, sphere(7)).cyclic == (2 ** r,)
        assert hom_group(a, sphere(6)).cyclic == ((2,) if r == 1 else (4,))
    for r in PARAMS:
        for s in PARAMS:
            b = smash_atom(ceta(5), cfull(r, 5, s))
            want = (2, 2 ** s) if r == 1 else (2 ** (s + 1), 2)
            assert atom_homotopy(b, 9).cyclic == want


def test_atom_tables_shift_with_suspension():
    from chang.complexes import SmashAtom
    a = SmashAtom(moore(2, 2, 3), ceta(5), 2)
    assert atom_homotopy(a, 10).cyclic == (4,)        # bottom + 2


def test_wedge_hom_order_and_point():
    got = wedge_hom_order(sphere(9), wedge(cbot(3, 9), cfull(2, 9, 3)))
    assert got == [0, 2, 2, 2]
    assert wedge_hom_order(wedge(moore(2, 1, 3), moore(2, 1, 3)),
                           wedge(sphere(3))) == [2, 2]
    assert wedge_hom_order(wedge(sphere(5)), wedge()) == []
    assert wedge_hom_order(sphere(5), wedge(sphere(5)), degree=1) == [2]


def test_untabulated_and_stability_errors():
    with pytest.raises(UntabulatedHom):
        hom_group(sphere(9), sphere(4))
    with pytest.raises(UntabulatedHom):
        hom_group(sphere(7), moore(2, 1, 4))     # needs bottom >= 5
    with pytest.raises(UntabulatedHom) as err:
        wedge_hom_order(sphere(9), wedge(cbot(3, 9), cbot(3, 5)))
    assert "missing cell" in str(err.value)
    with pytest.raises(UntabulatedHom):
        hom_group(smash_atom(cbot(1, 5), cbot(2, 5)), sphere(6))


def test_stability_independence():
    for d in (5, 6, 8):
        assert hom_group(moore(2, 2, d + 1), sphere(d)).cyclic == \
            hom_group(moore(2, 2, 6), sphere(5)).cyclic
        assert hom_group(sphere(d + 1), ctop(d + 2, 2)).cyclic == (8,)


def test_generator_order_soundness():
    samples = [hom_group(sphere(8), moore(2, 2, 5)),
               hom_group(moore(2, 2, 6), moore(2, 3, 5)),
               hom_group(sphere(8), ctop(9, 3)),
               hom_group(cfull(1, 9, 2), sphere(8)),
               hom_group(sphere(9), cbot(2, 9))]
    for d in samples:
        n_infinite = sum(1 for q in d.group if q == 0)
        torsion = 1
        for q in d.group:
            if q:
                torsion *= q
        gen_infinite = sum(1 for _, o, _ in d.generators if o == 0)
        gen_torsion = 1
        for _, o, _ in d.generators:
            if o:
                gen_torsion *= o
        assert n_infinite == gen_infinite
        assert gen_torsion == torsion
        exponent = max([q for q in d.group if q], default=0)
        for _, o, _ in d.generators:
            if o and exponent:
                assert exponent % o == 0


def test_duality_consistency_of_table():
    samples = [(moore(2, 2, 6), sphere(5)), (sphere(7), moore(2, 1, 5)),
               (moore(2, 1, 6), moore(2, 3, 5)), (cbot(2, 7), sphere(5)),
               (sphere(7), ctop(7, 2)), (cfull(2, 7, 1), sphere(7)),
               (ceta(7), sphere(5)), (sphere(6), cbot(3, 7)),
               (cfull(2, 7, 3), sphere(6)), (sphere(6), ctop(7, 1))]
    for X, Y in samples:
        g1 = hom_group(X, Y)
        checked = False
        for n in range(3, 10):
            m = 2 * n + 2
            try:
                DX, DY = dual_elementary(X, m), dual_elementary(Y, m)
                g2 = hom_group(DY, DX)
            except (ValueError, UntabulatedHom):
                continue
            assert g1.group == g2.group, (X, Y, m)
            checked = True
            break
        assert checked, (X, Y)


def test_pi9_extension_bounds():
    assert pi9_smash_extension(2, 3, 1, 2) == ((2, 2, 2, 4), (2, 2))
    assert pi9_smash_extension(2, 3, 2, 2) == ((2, 2, 2, 8), (2, 2))
    with pytest.raises(UntabulatedHom):
        pi9_smash_extension(1, 3, 2, 2)      # needs r >= 2


def test_table_path_override(tmp_path, monkeypatch):
    import importlib.resources as resources
    from chang import homgroups
    src = resources.files("chang").joinpath("data", "hom_tables.txt")
    text = src.read_text(encoding="utf-8").replace(
        "hom; S; S; 3; -; Z/24; ϱ:24; 5;", "hom; S; S; 3; -; Z/240; ϱ:240; 5;")
    (tmp_path / "hom_tables.txt").write_text(text, encoding="utf-8")
    monkeypatch.setenv("CHANG_TABLE_PATH", str(tmp_path))
    homgroups.load_table.cache_clear()
    try:
        assert hom_group(sphere(8), sphere(5)).cyclic == (240,)
    finally:
        monkeypatch.delenv("CHANG_TABLE_PATH")
        homgroups.load_table.cache_clear()
    assert hom_group(sphere(8), sphere(5)).cyclic == (24,)


def test_point_kills_hom_groups():
    from chang.complexes import POINT
    assert hom_group(POINT, sphere(5)).group == ()
    assert hom_group(sphere(5), POINT).group == ()
