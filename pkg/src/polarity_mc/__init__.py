"""Polarity-based semantics for normal non-distributive modal logic.

Models are formal contexts with I-compatible box/diamond relations and
concept-valued valuations; the package evaluates the two sorted
satisfaction relations, builds concept lattices and filter-ideal
extensions, computes greatest (bi)simulations and exact modal-equivalence
relations, translates to two-sorted first-order logic, and checks the
Hennessy-Milner correspondence on finite models.
"""

from .formula import (And, Bot, Box, Dia, ModalFormula, Or, ParseError,
                      Sequent, Top, Var, enumerate_formulas, parse_formula,
                      parse_sequent, print_formula, print_sequent)
from .lattice import (CapExceeded, Concept, ConceptLattice, FIExtension,
                      Filter, Ideal, all_filters, all_ideals, box_op,
                      concept_lattice, dia_op, filter_ideal_extension,
                      principal_filter, principal_ideal)
from .model import (KripkeModel, LEModel, Polarity, SortError, Violation,
                    galois_down, galois_up, lift_kripke, make_concept,
                    rel_preimage, validate_model)
from .modelio import (ModelFormatError, load_kripke, load_model,
                      model_from_dict, model_to_dict, save_model)
from .semantics import (SortedValuation, extension, fol_assignments,
                        fol_eval, fol_sat_points, models_sequent, sat_sets,
                        satisfies_a, satisfies_x)
from .simrel import (EquivReport, HMReport, SimPair, SimViolation,
                     Ultrapower, bisimilar_points, greatest_bisimulation,
                     greatest_simulation, hm_check, is_bisimulation,
                     is_simulation, m_saturation_witness, modal_equiv_oracle,
                     ultrapower_principal)

__all__ = [name for name in dir() if not name.startswith("_")]
