"""Generalized statistics of invertible excitations on simplicial complexes."""

from .complex import SimplicialComplex, minimal_sphere_triangulation, parse_complex
from .extractor import (StatisticsGroup, compute_statistics, extract_sequence, minimize_sequence,
                        verify_invariance)
from .group import FiniteAbelianGroup, make_group, parse_group
from .identities import default_depth, generate_identities, saturation_check
from .linalg import SmithDecomposition, SparseIntMatrix, classify, hnf, in_row_span, snf
from .model import ExcitationModel, ThetaVector, Word, build_model, evaluate_word, parse_word
from .synthmodel import PhaseAssignment, deform, evaluate, sample_assignment

__version__ = "0.1.0"
