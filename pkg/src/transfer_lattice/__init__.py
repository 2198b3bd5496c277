"""Transfer systems on finite groups, their hom-closed refinements, family
systems with the restriction/extension adjunction, and admissible G-set data."""

from .family import (EmbeddingError, FamilyError, FamilyTransferSystem, GroupFamily, check_adjunction,
                     embeds, enumerate_family_systems, family_of_subgroups, induced_collisions, r_g,
                     reconstruct, u_g, validate_family)
from .groups import (FiniteGroup, GroupError, GroupOrderError, Homomorphism, Subgroup, SubgroupLattice,
                     compose_perms, conjugate_subgroup, enumerate_homomorphisms, make_cyclic,
                     make_direct_product, make_quaternion, make_symmetric, preimage_subgroup,
                     standalone_copies, subgroup_lattice)
from .gsets import (AdmissibleFamily, GraphSubgroup, GSet, NotAGraphSubgroupError, admissible_family,
                    all_gsets, blk, compose_orbits, coset_gset, disjoint_union, graph_of, graph_subgroups,
                    graph_to_witness, is_admissible_gset, orbits, regular_gset, structure_violations,
                    transfer_of_family, trivial_gset)
from .hom_closed import enumerate_hom_closed, hom_closure, is_hom_closed
from .transfer import (EnumerationBudgetError, LatticeMismatchError, TransferPoset, TransferSystem, close,
                       enumerate_transfer_systems, is_subsystem, join, meet, transitive_closure, validate)

__version__ = "0.1.0"
