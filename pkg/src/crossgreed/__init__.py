"""Feature-cross search by greedy submodular maximization of normalized AUC.

The package selects k categorical feature columns whose Cartesian-product
cross maximizes the best achievable AUC, evaluated exactly (rational
arithmetic) or at scale (float score-distribution convolutions), together
with generators and numeric verifiers for the structural facts the search
rests on.
"""

from .errors import (
    CapacityError,
    CrossgreedError,
    DatasetError,
    DegenerateLabelError,
    DomainMismatchError,
    VerificationError,
)
from .measures import Involution, Measure, commutator_tv, tv_distance
from .nb_model import ColumnModel, ConditionalPair, NbObjective
from .selector import (
    SearchReport,
    exhaustive_select,
    greedy_select,
    lazy_greedy_select,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ColumnModel",
    "ConditionalPair",
    "CrossgreedError",
    "DatasetError",
    "DegenerateLabelError",
    "DomainMismatchError",
    "Involution",
    "Measure",
    "NbObjective",
    "SearchReport",
    "VerificationError",
    "commutator_tv",
    "exhaustive_select",
    "greedy_select",
    "lazy_greedy_select",
    "tv_distance",
    "__version__",
]
