"""Question decomposition engine: a next-question generator routes sub-questions
to a span QA model and a symbolic calculator, and best-first search picks the
decomposition chain that stays closest to the original question."""

from .core import (Chain, ChainStep, ComplexQuestion, Context, EMPTY_CONTEXT, EOQ_TOKEN, ModelId,
                   parse_history, render_history)
from .errors import TMNError

__version__ = "0.1.0"

__all__ = [
    "Chain", "ChainStep", "ComplexQuestion", "Context", "EMPTY_CONTEXT", "EOQ_TOKEN", "ModelId",
    "TMNError", "parse_history", "render_history", "__version__",
]
