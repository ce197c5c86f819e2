from .core import (
    GroupInvariants,
    GroupTable,
    GroupValidationError,
    SizeLimitError,
    center,
    centralizer,
    compute_invariants,
    direct_product,
    distinct_centralizers,
    element_order,
    is_ac_group,
    load_group,
    maximal_cyclic_subgroups,
    nilpotent_decomposition,
    save_group,
    subgroup,
    validate,
)
from .families import (
    FamilySpec,
    abelian_product,
    alternating,
    build,
    cyclic,
    dihedral,
    generalized_dihedral,
    generalized_quaternion,
    heisenberg,
    metacyclic_pq,
    parse_descriptor,
    perm_closure,
    pgl2,
    psl2,
    symmetric,
)
