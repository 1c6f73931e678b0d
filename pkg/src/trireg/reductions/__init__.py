"""Hardness reductions: formulas, gadgets, builders and a propagation solver."""

from .formulas import (NAE, ONE_IN_THREE, FormulaError, PositiveCnf, bruteForceSat, formula,
                       loadFormula, repeated_clause_instance, saveFormula, validateFormula)
from .solver import (Coloring, FlipMode, RcMode, Skeleton, Timeout, Unsat, solveColoring)
from .gadgets import (GadgetSpec, GadgetTemplate, checkRigidity, enumerateGadgetColorings,
                      loadTemplate, searchGadget)
from .build import (ReductionError, ReductionOutput, assignmentToColoring, buildFlipReduction,
                    buildRcReduction, decodeAssignment, gadget_cluster, verifyColoring,
                    verifyStructure)
