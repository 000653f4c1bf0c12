"""Subgroup filters, ultrafilters, the ordinary-filter bridge and convergence."""

import pytest

from topogroups.groups import build_group
from topogroups.lattice import enumerate_subgroups
from topogroups.toposystems import build_toposys
from topogroups.filters import (
    IdentityNotAllowedError,
    NoFipError,
    NotAFilterError,
    OrdinaryFilter,
    SubgroupFilter,
    all_filters,
    convergence_set,
    converges_to,
    enumerate_ultrafilters,
    extend_to_ultrafilter,
    filter_axiom_report,
    generate_filter,
    is_ultrafilter,
    is_ultrafilter_bruteforce,
    ordinary_bridge,
    parse_filter,
    principal_filter,
    pushforward,
    restrict_ordinary,
    theorem_checks,
)
from topogroups.products import direct_product

SMALL_LATTICE_DESCRIPTORS = ("cyclic:4", "cyclic:6", "abelian:2x2", "sym:3", "quaternion:8")


def _lat(desc):
    return enumerate_subgroups(build_group(desc))


def test_generate_filter_examples():
    lat = _lat("sym:3")
    assert generate_filter(lat, [lat.top_index]).member_indices == (lat.top_index,)
    assert generate_filter(lat, [4]).member_indices == (4, 5)
    with pytest.raises(NoFipError) as exc:
        generate_filter(lat, [1, 2])
    assert set(exc.value.witness) == {1, 2}


def test_generate_filter_outputs_satisfy_axioms():
    for desc in SMALL_LATTICE_DESCRIPTORS:
        lat = _lat(desc)
        for seed in ([lat.top_index], [1], [1, lat.top_index]):
            try:
                f = generate_filter(lat, seed)
            except NoFipError:
                continue
            assert filter_axiom_report(lat, f.members).passed


def test_principal_filter_examples():
    lat4 = _lat("cyclic:4")
    assert [lat4.subgroup(i).order for i in principal_filter(lat4, 2).member_indices] == [2, 4]
    lat = _lat("sym:3")
    assert principal_filter(lat, 3).member_indices == (4, 5)
    latv = _lat("abelian:2x2")
    assert [latv.subgroup(i).order for i in principal_filter(latv, 1).member_indices] == [2, 4]
    with pytest.raises(IdentityNotAllowedError):
        principal_filter(lat, 0)


def test_ordinary_bridge_round_trip():
    lat = _lat("sym:3")
    for x in range(1, 6):
        f = principal_filter(lat, x)
        assert restrict_ordinary(lat, ordinary_bridge(f)).members == f.members
    g = SubgroupFilter(lat, frozenset({lat.top_index}))
    assert restrict_ordinary(lat, ordinary_bridge(g)).members == g.members


@pytest.mark.parametrize("desc", SMALL_LATTICE_DESCRIPTORS)
def test_ordinary_bridge_round_trip_on_all_small_filters(desc):
    lat = _lat(desc)
    for members in all_filters(lat):
        f = SubgroupFilter(lat, members)
        assert restrict_ordinary(lat, ordinary_bridge(f)).members == members


def test_restrict_of_principal_ordinary_ultrafilter():
    lat = _lat("sym:3")
    for x in range(1, 6):
        point = OrdinaryFilter(lat.group, (1 << x,))
        assert restrict_ordinary(lat, point).members == principal_filter(lat, x).members


def test_restrict_can_reject_identity_anchored_ultrafilter():
    # at the identity the restriction reaches all non-trivial subgroups of V4,
    # which is not meet-closed
    lat = _lat("abelian:2x2")
    point = OrdinaryFilter(lat.group, (1,))
    with pytest.raises(NotAFilterError):
        restrict_ordinary(lat, point)


def test_is_ultrafilter_examples():
    latv = _lat("abelian:2x2")
    ok, witness = is_ultrafilter(SubgroupFilter(latv, frozenset({latv.top_index})))
    assert not ok and witness == latv.top_index
    lat = _lat("sym:3")
    assert is_ultrafilter(principal_filter(lat, 1))[0]
    lat4 = _lat("cyclic:4")
    assert is_ultrafilter(SubgroupFilter(lat4, frozenset({lat4.top_index})))[0]


@pytest.mark.parametrize("desc", SMALL_LATTICE_DESCRIPTORS)
def test_ultrafilter_criterion_agrees_with_family_oracle(desc):
    lat = _lat(desc)
    assert len(lat) <= 6
    for members in all_filters(lat):
        f = SubgroupFilter(lat, members)
        assert is_ultrafilter(f)[0] == is_ultrafilter_bruteforce(f)[0]


@pytest.mark.parametrize("desc", SMALL_LATTICE_DESCRIPTORS)
def test_extension_contains_input_and_is_ultra(desc):
    lat = _lat(desc)
    for members in all_filters(lat):
        f = SubgroupFilter(lat, members)
        extended = extend_to_ultrafilter(f)
        assert f.members <= extended.members
        assert is_ultrafilter(extended)[0]


def test_extension_examples():
    lat = _lat("sym:3")
    f = generate_filter(lat, [4])  # {A3, S3}
    assert extend_to_ultrafilter(f).members == f.members
    latv = _lat("abelian:2x2")
    ext = extend_to_ultrafilter(SubgroupFilter(latv, frozenset({latv.top_index})))
    assert ext.provenance == "principal:1"


def test_enumerate_ultrafilter_counts():
    assert len(enumerate_ultrafilters(_lat("cyclic:4"))) == 2
    assert len(enumerate_ultrafilters(_lat("abelian:2x2"))) == 3
    assert len(enumerate_ultrafilters(_lat("sym:3"))) == 4


@pytest.mark.parametrize("desc", SMALL_LATTICE_DESCRIPTORS)
def test_enumeration_equals_bruteforce_ultrafilters(desc):
    lat = _lat(desc)
    expected = {
        members
        for members in all_filters(lat)
        if is_ultrafilter_bruteforce(SubgroupFilter(lat, members))[0]
    }
    assert {f.members for f in enumerate_ultrafilters(lat)} == expected


def test_pushforward_examples():
    lat = _lat("sym:3")
    g = lat.group
    from topogroups.groups import make_homomorphism

    ident = make_homomorphism(g, g, tuple(range(6)))
    f = principal_filter(lat, 1)
    assert pushforward(ident, f).members == f.members
    z2 = build_group("cyclic:2")
    even = {x for x in g.elements() if g.element_order(x) in (1, 3)}
    sign = make_homomorphism(g, z2, tuple(0 if x in even else 1 for x in g.elements()))
    pushed = pushforward(sign, f)
    assert pushed.member_indices == (1,)
    assert is_ultrafilter(pushed)[0]
    # projection pi_1 on Z2 x Z3 maps the filter at (1,1) to the filter at 1
    p = direct_product([z2, build_group("cyclic:3")])
    plat = enumerate_subgroups(p.group)
    f11 = principal_filter(plat, p.encode((1, 1)))
    pushed = pushforward(p.projections[0], f11)
    assert pushed.members == principal_filter(enumerate_subgroups(z2), 1).members


def test_pushforward_preserves_ultra_on_catalog_homomorphisms():
    z2 = build_group("cyclic:2")
    p = direct_product([build_group("cyclic:4"), z2])
    plat = enumerate_subgroups(p.group)
    for f in enumerate_ultrafilters(plat):
        for hom in p.projections + p.embeddings[:1]:
            if hom.source != p.group:
                continue
            pushed = pushforward(hom, f)
            assert is_ultrafilter(pushed)[0]


def test_pushforward_degenerate_case_is_rejected():
    # kernel in the filter and a target with two minimal subgroups
    g = build_group("sym:3")
    z2 = build_group("cyclic:2")
    p = direct_product([g, z2])
    plat = enumerate_subgroups(p.group)
    f = principal_filter(plat, p.encode((0, 1)))  # anchored inside ker(pi_1)
    with pytest.raises(NotAFilterError):
        pushforward(p.projections[0], f)


def test_convergence_examples():
    lat = _lat("sym:3")
    tn = build_toposys(lat, "normal")
    ds = build_toposys(lat, "discrete")
    for x in range(1, 6):
        ok, certificate = converges_to(principal_filter(lat, x), tn, x)
        assert ok and certificate.target == x
        assert all(i in principal_filter(lat, x).members for i in certificate.checked)
    f3 = principal_filter(lat, 3)
    assert convergence_set(f3, tn).points == (1, 2, 3, 4, 5)
    f1 = principal_filter(lat, 1)
    assert convergence_set(f1, ds).points == (1,)


def test_identity_never_converges():
    for desc in SMALL_LATTICE_DESCRIPTORS:
        lat = _lat(desc)
        system = build_toposys(lat, "discrete")
        for f in enumerate_ultrafilters(lat):
            assert not converges_to(f, system, 0)[0]


def test_theorem_checks_cells():
    lat = _lat("sym:3")
    ds = build_toposys(lat, "discrete")
    report = theorem_checks(lat, ds)
    assert report.passed and report.hausdorff
    tn = build_toposys(lat, "normal")
    report = theorem_checks(lat, tn)
    assert report.passed and not report.hausdorff
    assert report.multi_point_witness is not None
    lat4 = _lat("cyclic:4")
    tv = build_toposys(lat4, "trivial")
    report = theorem_checks(lat4, tv)
    assert report.passed and report.hausdorff
    # every non-identity point is a limit of F_1, but no pair is cyclically distinct
    f1 = principal_filter(lat4, 1)
    assert convergence_set(f1, tv).points == (1, 2, 3)


def test_parse_filter_literals():
    lat = _lat("cyclic:4")
    assert parse_filter(lat, "principal:2").member_indices == (1, 2)
    assert parse_filter(lat, "generated:#1").member_indices == (1, 2)
    assert parse_filter(lat, "cofinite").member_indices == (1, 2)
    latv = _lat("abelian:2x2")
    with pytest.raises(NotAFilterError):
        parse_filter(latv, "cofinite")
