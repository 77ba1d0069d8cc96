"""Groups acting on regular trees whose local action is prescribed outside finitely many vertices."""

from .criteria import ClassifierReport, classify, embedding_report, example_library, scan
from .gff import GroupPair
from .perm import PermGroup, construct_group
from .portrait import Portrait, format_portrait, parse_portrait
from .wreath import WreathContext, haar_measures

__version__ = "0.1.0"

__all__ = [
    "ClassifierReport", "GroupPair", "PermGroup", "Portrait", "WreathContext",
    "classify", "construct_group", "embedding_report", "example_library",
    "format_portrait", "haar_measures", "parse_portrait", "scan",
]
