"""Finite topo-groups: subgroup lattices, topo-systems, filters and theorems."""

from .groups import (
    FiniteGroup,
    Homomorphism,
    NotAHomomorphismError,
    OrderCapExceededError,
    Subgroup,
    TopoGroupError,
    UnknownKindError,
    build_group,
    element_order,
    make_homomorphism,
    subgroup_generated,
    verify_group_axioms,
)
from .lattice import (
    NotNormalError,
    ParentMismatchError,
    SubgroupLattice,
    UnsupportedVarietyError,
    automorphisms,
    brute_force_subgroup_masks,
    commutator_subgroup,
    core,
    enumerate_subgroups,
    is_characteristic,
    is_normal,
    join,
    meet,
    minimal_cover,
    normalizer,
    verbal_residual,
)
from .toposystems import (
    BadParameterError,
    TopoSystem,
    build_toposys,
    closure_and_limits,
    find_finite_subcover,
    generate_toposys,
    induced_toposys,
    interior_boundary,
    is_hausdorff,
    is_star_open,
    is_topomorphism,
    quotient_toposys,
    star_topology_checks,
    t_closed_checks,
    verify_toposys,
)
from .filters import (
    IdentityNotAllowedError,
    NoFipError,
    NotAFilterError,
    OrdinaryFilter,
    SubgroupFilter,
    TrivialGroupError,
    convergence_set,
    converges_to,
    enumerate_ultrafilters,
    extend_to_ultrafilter,
    generate_filter,
    is_ultrafilter,
    ordinary_bridge,
    principal_filter,
    pushforward,
    restrict_ordinary,
    theorem_checks,
)
from .products import (
    CertificateFailureError,
    ProductGroup,
    ProductToposys,
    direct_product,
    product_identities_check,
    product_toposys,
    tychonoff_certificate,
)
from .suites import DEFAULT_CATALOG, SuiteConfig, run_suite

__version__ = "0.1.0"
