"""Exact arithmetic for pi-typical Witt vectors, pi-derivations,
arithmetic jet algebras, and the Greenberg transform."""

from .errors import (AlgebraError, FeasibilityCap, IllDefined, NotCharP,
                     NotDivisible, SizeCapExceeded)
from .rings import (EISEN, GAUSS, NAMED_TRIPLES, Z2, Z3, BaseTriple,
                    FiniteRing, NumberRing, QuotientRing, finite_ring_from_json,
                    triple_from_json, validate_triple)
from .multipoly import Hom, MultiPoly, PolyRing, jet_var, q_delta
from .witt import (DrinfeldMap, WittRing, WittTable, WittVector, build_table,
                   delta_w, frobenius, teichmuller, truncate, verschiebung)
from .prolong import (Prolongation, ProlongationSequence, check_pi_derivation,
                      check_sequence, extend_delta, prolongation_from_w1,
                      prolongation_to_w1)
from .jet import (AlgebraPresentation, JetPresentation, PFamily,
                  adjunction_phi, adjunction_phi_inv, adjunction_report,
                  alt_presentation, enumerate_homs, exp_n, jet_algebra,
                  localization_check, p_polynomials, reduce_mod_pi)
from .greenberg import (ArtinPresentation, GreenbergContext, GreenbergRing,
                        comparison_report, drinfeld_u_tilde,
                        greenberg_transform)

__version__ = "0.1.0"
