"""Fuzzy-constrained linear discriminant analysis (FC-LDA).

Binary linear classifiers trained by a linear program whose constraints are
softened with tolerances and resolved by max-min aggregation, plus the
closed-form Fisher discriminant as a baseline.
"""
from .dataset import (
    Dataset,
    DatasetError,
    ReflectedDataset,
    augment_reflect,
    load_csv,
    load_iris,
    select_binary,
    synthetic_two_gaussians,
    write_csv,
)
from .discriminant import (
    Criterion,
    DiscriminantModel,
    FitError,
    ToleranceConfig,
    ToleranceMode,
    fit,
    load_model,
    predict,
    save_model,
)
from .fuzzy_lp import FuzzyLpProblem, FuzzySolution, solve_maxmin
from .lp_solver import LinearProgram, LpSolution, brute_force_solve, solve
from .metrics import MarginReport, margin_report, misclassification_count, noise_margin
from .olda import FisherModel, fit_fisher

__version__ = "0.1.0"
