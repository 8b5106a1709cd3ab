"""eicheck: decide hereditarity of finite EI category algebras and verify
every verdict with an exact linear-algebra oracle."""

from .category import (EICategory, HereditarityVerdict, decide_hereditary,
                       factorisation_poset, has_unique_factorisation,
                       one_object_category, opposite, poset_category,
                       skeletalise, unfactorisables, validate_ei)
from .groups import (CoefficientField, FiniteGroup, GroupMap, Subgroup,
                     centraliser, family_closure, is_cyclic_prime_power,
                     is_kx_finite, make_group, normaliser, preset_group,
                     subgroup_closure, transporter_set)
from .oracle import (category_algebra, is_hereditary_oracle, omega_verify,
                     oracle_gldim, radical)

__version__ = "0.1.0"
