from ._core import (
    Explosion,
    ParseError,
    SortError,
    check,
    compile,
    solvable,
    stages,
    target_solvable,
)

__all__ = [
    "Explosion",
    "ParseError",
    "SortError",
    "check",
    "compile",
    "solvable",
    "stages",
    "target_solvable",
]
