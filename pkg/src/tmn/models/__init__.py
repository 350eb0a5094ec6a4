from .base import (GeneratorService, GenRequest, NextGenCandidate, NextGenService, NullScorer,
                   QAService, Sampling, ScoredAnswer, ScorerService)
from .calc import CalculatorGenerator, CalculatorQA
from .http import HttpGenerator, HttpNextGen, HttpQA, HttpScorer
from .mock import HashScorer, ScriptedNextGen, TableQA, TemplateGenerator, history_sha256
from .registry import ModelRegistry, load_service

__all__ = [
    "CalculatorGenerator", "CalculatorQA", "GenRequest", "GeneratorService", "HashScorer",
    "HttpGenerator", "HttpNextGen", "HttpQA", "HttpScorer", "ModelRegistry", "NextGenCandidate",
    "NextGenService", "NullScorer", "QAService", "Sampling", "ScoredAnswer", "ScorerService",
    "ScriptedNextGen", "TableQA", "TemplateGenerator", "history_sha256", "load_service",
]
