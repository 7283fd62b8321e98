"""Finite group tensor products from presentations.

Parse a finite presentation, enumerate cosets to a permutation
realization, pair two groups through compatible actions, and build the
tensor product together with its pairing maps, exterior quotient, and
Schur multiplier cross-checks.
"""

from .abelian import (AbelianGroup, gamma_whitehead, lambda2_exterior,
                      smith_normal_form, z_tensor, z_tensor_power)
from .actions import (ActionPair, CompatReport, automorphism_images,
                      check_compatibility, conjugation_pair, pair_from_words,
                      subgroup_conjugation_pair)
from .coset_enum import CosetTable, EnumLimits, enumerate_cosets
from .errors import LimitExceeded, SizeLimitError
from .homology import H2Report, h2_cross_check, h2_via_cocycles, h2_via_wedge
from .permgrp import (GroupHom, PermGroup, PresentedGroup,
                      abelian_invariants, cayley_presentation, define_hom,
                      realize)
from .presentation import Presentation, Word, parse_presentation, parse_word
from .tensor import (TensorGroup, TensorPowerTower, build_eta, build_nu,
                     delta_subgroup, derivative, exterior_product,
                     lambda_map, lambda_n_map, tensor_commutator_check,
                     tensor_power, tensor_with_subgroup)
from .verify import (CheckResult, CorpusEntry, builtin_corpus,
                     finiteness_check, run_identity_suite,
                     run_schur_baer_suite, run_suite,
                     schur_baer_divisibility)

__version__ = "0.1.0"
