import itertools

import pytest
from hypothesis import given, strategies as st

from transfer_lattice import (EmbeddingError, FamilyError, FamilyTransferSystem, GroupFamily, TransferSystem,
                              check_adjunction, embeds, enumerate_family_systems, enumerate_hom_closed,
                              enumerate_transfer_systems, family_of_subgroups, is_hom_closed, make_cyclic,
                              make_direct_product, make_quaternion, make_symmetric, r_g, reconstruct,
                              subgroup_lattice, u_g, validate_family)
from transfer_lattice.family import subgroup_family

C1, C2, C3, C4 = (make_cyclic(n) for n in (1, 2, 3, 4))
C2C2 = make_direct_product(C2, C2)
S3 = make_symmetric(3)
BIGS = [make_cyclic(8), S3, make_quaternion()]


def lat(g):
    return subgroup_lattice(g)


def test_distinct_names_required():
    with pytest.raises(FamilyError):
        GroupFamily([C2, C2])


def test_uniform_families_valid():
    fam = GroupFamily([C2, C4, S3])
    assert validate_family(FamilyTransferSystem.uniform(fam, False))
    assert validate_family(FamilyTransferSystem.uniform(fam, True))


def test_squaring_map_breaks_pullback():
    fam = GroupFamily([C2, C4])
    s = FamilyTransferSystem(fam, {"C2": TransferSystem.complete(lat(C2)), "C4": TransferSystem.empty(lat(C4))})
    res = validate_family(s)
    assert not res
    w = res.witness
    assert (w.source, w.target) == ("C4", "C2")
    assert w.theta.image() == C2.whole()


def test_wrong_member_system_rejected():
    fam = GroupFamily([C2, C4])
    with pytest.raises(FamilyError):
        FamilyTransferSystem(fam, {"C2": TransferSystem.empty(lat(C4)), "C4": TransferSystem.empty(lat(C4))})
    with pytest.raises(FamilyError):
        FamilyTransferSystem(fam, {"C2": TransferSystem.empty(lat(C2))})


def test_u_g_examples():
    fam = GroupFamily([C2, C4, S3])
    assert u_g(FamilyTransferSystem.uniform(fam, False), S3) == TransferSystem.empty(lat(S3))
    assert u_g(FamilyTransferSystem.uniform(fam, True), "C4") == TransferSystem.complete(lat(C4))
    with pytest.raises(FamilyError):
        u_g(FamilyTransferSystem.uniform(fam, True), C3)


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_u_g_of_valid_family_is_hom_closed(g):
    fam = subgroup_family(g)
    for s in enumerate_family_systems(fam):
        assert validate_family(s)
        for m in fam:
            assert is_hom_closed(u_g(s, m))


def test_r_g_of_trivial_group_is_everything():
    fam = GroupFamily([C1, C2, C4, S3, C2C2])
    out = r_g(TransferSystem.empty(lat(C1)), fam)
    assert out == FamilyTransferSystem.uniform(fam, True)


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_r_g_of_everything(g):
    fam = subgroup_family(g)
    assert r_g(TransferSystem.complete(lat(g)), fam) == FamilyTransferSystem.uniform(fam, True)


@pytest.mark.parametrize("p,others", [(2, [C4, C2C2, S3, make_cyclic(6), make_quaternion()]),
                                      (3, [make_cyclic(9), S3, make_cyclic(6), make_direct_product(C3, C3)])])
def test_r_g_of_empty_on_prime_cyclic(p, others):
    cp = make_cyclic(p)
    fam = GroupFamily([cp, *others])
    out = r_g(TransferSystem.empty(lat(cp)), fam)
    assert validate_family(out)
    for m in fam:
        ml = lat(m)
        for k, h in ml.pairs:
            kk, hh = ml.subgroups[k], ml.subgroups[h]
            expected = all(x in kk for x in hh.elements if m.element_orders[x] == p)
            assert out[m.name].le(k, h) == expected


def test_r_g_requires_membership():
    with pytest.raises(FamilyError):
        r_g(TransferSystem.empty(lat(C3)), GroupFamily([C2, C4]))


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_r_g_always_valid(g):
    fam = subgroup_family(g)
    for t in enumerate_transfer_systems(lat(g)).systems:
        assert validate_family(r_g(t, fam))


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_unit_and_counit(g):
    fam = subgroup_family(g)
    for t in enumerate_transfer_systems(lat(g)).systems:
        back = u_g(r_g(t, fam), g)
        assert back.mask & ~t.mask == 0
        assert (back == t) == bool(is_hom_closed(t))
    for s in enumerate_family_systems(fam):
        assert s <= r_g(u_g(s, g), fam)


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_adjunction_exhaustive(g):
    fam = subgroup_family(g)
    systems = enumerate_transfer_systems(lat(g)).systems
    family_systems = enumerate_family_systems(fam)
    for t in systems:
        for s in family_systems:
            assert check_adjunction(t, s)


def test_adjunction_extremes():
    fam = subgroup_family(S3)
    top = FamilyTransferSystem.uniform(fam, True)
    everything, nothing = TransferSystem.complete(lat(S3)), TransferSystem.empty(lat(S3))
    for s in enumerate_family_systems(fam):
        assert u_g(s, S3).mask & ~everything.mask == 0 and s <= r_g(everything, fam)
    assert not (u_g(top, S3).mask & ~nothing.mask == 0)
    assert not top <= r_g(nothing, fam)
    assert check_adjunction(nothing, top)


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_monotone(g):
    fam = subgroup_family(g)
    systems = enumerate_transfer_systems(lat(g)).systems
    for a, b in itertools.product(systems, repeat=2):
        if a.mask & ~b.mask == 0:
            assert r_g(a, fam) <= r_g(b, fam)
    fs = enumerate_family_systems(fam)
    for a, b in itertools.product(fs, repeat=2):
        if a <= b:
            assert u_g(a, g).mask & ~u_g(b, g).mask == 0


@pytest.mark.parametrize("g", BIGS, ids=lambda g: g.name)
def test_reconstruct_is_identity(g):
    fam = subgroup_family(g)
    family_systems = enumerate_family_systems(fam)
    assert len(family_systems) == len(enumerate_hom_closed(lat(g)))
    for s in family_systems:
        assert reconstruct(s, g) == s
    top = FamilyTransferSystem.uniform(fam, True)
    assert reconstruct(top, g) == top


def test_reconstruct_with_several_bigs():
    fam = GroupFamily([C1, C2, C4, C2C2])
    with pytest.raises(EmbeddingError):
        reconstruct(FamilyTransferSystem.uniform(fam, True), C4)
    for s in enumerate_family_systems(fam):
        assert reconstruct(s, [C4, C2C2]) == s


def test_embeds():
    assert embeds(C2, C4) is not None
    assert embeds(C2C2, C4) is None
    assert embeds(C3, C4) is None
    assert embeds(C3, S3).is_injective


def test_family_of_subgroups_names():
    fam = family_of_subgroups(S3)
    assert fam.names == ["S3", "S3@0", "S3@1", "S3@2", "S3@3", "S3@4"]


MEET_FAMILY = GroupFamily([C2, C4, C2C2, S3])
MEET_SYSTEMS = enumerate_family_systems(MEET_FAMILY)


@given(st.sampled_from(MEET_SYSTEMS), st.sampled_from(MEET_SYSTEMS))
def test_meets_of_family_systems_are_valid(a, b):
    m = a.meet(b)
    assert validate_family(m)
    assert m <= a and m <= b
