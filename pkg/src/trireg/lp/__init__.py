"""Exact feasibility for the triangle-density systems and their supersaturation cuts."""

from .system import (LE, EQ, RationalLinearSystem, TriangleDensityVector, addFlipConstraints,
                     buildSystem, flipSystem, graphDensityVector, triples, xname, cname)
from .simplex import Feasible, Infeasible, Unknown, solveFeasibility, verifyCertificate, verifyWitness
from .cuts import GOODMAN, STATED, refuteWithCuts, supersaturationCheck, supersaturationCut
from .scan import ScanReport, flipBoundedScan
