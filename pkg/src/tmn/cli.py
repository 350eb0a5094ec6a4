"""``tmn`` command line: classify, datagen, answer, eval.

Configuration is one JSON document::

    {
      "endpoints": {"qa": "mock://fixture.json", "generate": "mock://fixture.json",
                    "next": "mock://fixture.json", "score": "null"},
      "search": {"n0": 15, "decay": 0.5, "scorer_weight": 10, "budget": 500},
      "filter": {"theta_max": 0.3, "mu_max": 0.3, "sum_max": 0.4},
      "datagen": {"per_step": 5, "cap": 50, "scorer_samples": 5, "distractor_range": [2, 7]},
      "http": {"timeout": 30, "attempts": 3, "backoff": 0.25},
      "overlap_threshold": 0.8,
      "stopwords": "path/to/stopwords.txt",
      "seed": 0
    }

Relative paths resolve against the config file's directory. Command-line
flags override the file.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterator, Optional, Sequence, TextIO

from .core import ComplexQuestion
from .datagen import decompose, emit_nextgen_examples, emit_scorer_examples, prep_qgen_training
from .errors import ConfigError, DataFormatError, NoChainFound, ServiceUnavailable, TMNError
from .hints import QuestionClass, classify, extract_hints, hints_record
from .models import ModelRegistry, NullScorer
from .search import SearchConfig, answer_question, evaluate
from .textscore import DEFAULT_OVERLAP_THRESHOLD, Lexicon, load_stopwords, set_default_lexicon

log = logging.getLogger("tmn")

EMIT_KINDS = ("nextgen", "scorer", "qgen")


@dataclass
class EngineConfig:
    endpoints: dict[str, str] = field(default_factory=dict)
    search: SearchConfig = field(default_factory=SearchConfig)
    filter: tuple[float, float, float] = (0.3, 0.3, 0.4)
    per_step: int = 5
    cap: int = 50
    scorer_samples: int = 5
    distractor_range: tuple[int, int] = (2, 7)
    http: dict[str, Any] = field(default_factory=dict)
    overlap_threshold: float = DEFAULT_OVERLAP_THRESHOLD
    stopwords: Optional[str] = None
    seed: Optional[int] = None
    base_dir: Path = Path(".")

    @classmethod
    def load(cls, path: Optional[str]) -> "EngineConfig":
        if path is None:
            return cls()
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {p} is not valid JSON: {exc}") from None
        return cls.from_mapping(data, p.parent)

    @classmethod
    def from_mapping(cls, data: dict[str, Any], base_dir: Path = Path(".")) -> "EngineConfig":
        try:
            flt = data.get("filter", {})
            gen = data.get("datagen", {})
            cfg = cls(
                endpoints=dict(data.get("endpoints", {})),
                search=SearchConfig.from_mapping(data.get("search", {})),
                filter=(flt.get("theta_max", 0.3), flt.get("mu_max", 0.3), flt.get("sum_max", 0.4)),
                per_step=gen.get("per_step", 5),
                cap=gen.get("cap", 50),
                scorer_samples=gen.get("scorer_samples", 5),
                distractor_range=tuple(gen.get("distractor_range", (2, 7))),
                http=dict(data.get("http", {})),
                overlap_threshold=data.get("overlap_threshold", DEFAULT_OVERLAP_THRESHOLD),
                stopwords=data.get("stopwords"),
                seed=data.get("seed"),
                base_dir=base_dir,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config: {exc}") from None
        if cfg.stopwords and not os.path.isabs(cfg.stopwords):
            cfg.stopwords = str(base_dir / cfg.stopwords)
        return cfg

    def registry(self) -> ModelRegistry:
        return ModelRegistry.from_endpoints(self.endpoints, self.base_dir, self.overlap_threshold,
                                            **self.http)


# -- JSONL i/o ---------------------------------------------------------------

def read_jsonl(path: str) -> Iterator[tuple[int, dict[str, Any]]]:
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(path, n, f"invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise DataFormatError(path, n, "expected a JSON object")
            yield n, rec


def read_questions(path: str) -> list[ComplexQuestion]:
    out = []
    for n, rec in read_jsonl(path):
        try:
            out.append(ComplexQuestion.from_record(rec))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(path, n, f"not a question record ({exc})") from None
    return out


def dumps(rec: Any) -> str:
    return json.dumps(rec, ensure_ascii=False)


def _open_out(path: Optional[str]) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_all(path: Optional[str], records: Sequence[Any]) -> None:
    fh = _open_out(path)
    try:
        for rec in records:
            fh.write(dumps(rec) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- commands ----------------------------------------------------------------

def cmd_classify(args, cfg: EngineConfig) -> int:
    questions = read_questions(args.input)

    def one(q: ComplexQuestion):
        classes = classify(q)
        chains = []
        if q.gold_answer and classes != {QuestionClass.OUT_OF_SCOPE}:
            chains = extract_hints(q, classes)
        return hints_record(q, classes, chains)

    records = _map(one, questions, args.jobs)
    _write_all(args.output, records)
    counts: dict[str, int] = {}
    for rec in records:
        for c in rec["classes"]:
            counts[c] = counts.get(c, 0) + 1
    detail = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    print(f"{len(records)} questions" + (f" ({detail})" if detail else ""), file=sys.stderr)
    return 0


class Progress:
    """Append-only record of finished items so an aborted run can resume."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.done: dict[int, list] = {}
        if path and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self.done[rec["index"]] = rec["records"]

    def record(self, index: int, records: list) -> None:
        self.done[index] = records
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(dumps({"index": index, "records": records}) + "\n")

    def finish(self) -> None:
        if self.path and os.path.exists(self.path):
            os.remove(self.path)


def _datagen_items(args, cfg: EngineConfig) -> tuple[list, Callable[[Any], list]]:
    seed = cfg.seed
    if args.emit == "qgen":
        records = [rec for _, rec in read_jsonl(args.input)]
        for i, rec in enumerate(records):
            if not all(k in rec for k in ("context", "question", "answer")):
                raise DataFormatError(args.input, i + 1, "qgen input needs context, question, answer")
        examples = prep_qgen_training(records, cfg.distractor_range, seed)
        return [[e.to_record()] for e in examples], lambda recs: recs

    questions = read_questions(args.input)
    registry = cfg.registry()
    if args.emit == "nextgen":
        def one(q: ComplexQuestion) -> list:
            chains = decompose(q, registry, cfg.per_step, cfg.cap, seed, cfg.filter)
            return [e.to_record() for e in emit_nextgen_examples(chains)]
    else:
        sampler = replace(registry, scorer=NullScorer())
        search = replace(cfg.search, n0=cfg.scorer_samples, seed=seed, greedy=False)

        def one(q: ComplexQuestion) -> list:
            if not q.gold_answer or classify(q) == {QuestionClass.OUT_OF_SCOPE}:
                return []
            try:
                result = answer_question(q, sampler, search)
            except NoChainFound:
                return []
            chains = [s.chain for s in result.completed]
            return [e.to_record() for e in emit_scorer_examples(q, chains)]
    return questions, one


def cmd_datagen(args, cfg: EngineConfig) -> int:
    items, one = _datagen_items(args, cfg)
    progress_path = args.progress or (args.output + ".progress" if args.output and args.output != "-" else None)
    progress = Progress(progress_path)
    todo = [i for i in range(len(items)) if i not in progress.done]

    def run(i: int) -> tuple[int, list]:
        return i, one(items[i])

    try:
        if args.jobs <= 1:
            for i in todo:
                progress.record(*run(i))
        else:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                for i, recs in pool.map(run, todo):
                    progress.record(i, recs)
    except ServiceUnavailable:
        if progress_path:
            print(f"progress saved to {progress_path}; rerun to resume", file=sys.stderr)
        raise
    records = [r for i in range(len(items)) for r in progress.done[i]]
    _write_all(args.output, records)
    progress.finish()
    empty = sum(1 for i in range(len(items)) if not progress.done[i])
    print(f"{len(items)} inputs, {len(records)} {args.emit} examples", file=sys.stderr)
    if empty:
        print(f"warning: {empty} inputs produced no examples", file=sys.stderr)
    return 0


def cmd_answer(args, cfg: EngineConfig) -> int:
    questions = read_questions(args.input)
    registry = cfg.registry()
    search = replace(cfg.search, seed=cfg.seed if cfg.seed is not None else cfg.search.seed,
                     greedy=args.greedy or cfg.search.greedy)

    def one(q: ComplexQuestion) -> dict:
        try:
            return answer_question(q, registry, search).to_record()
        except NoChainFound:
            return {"id": q.id, "answer": None, "score": None, "explored": None, "chain": []}

    records = _map(one, questions, args.jobs)
    _write_all(args.output, records)
    answered = sum(1 for r in records if r["answer"] is not None)
    print(f"{len(records)} questions, {answered} answered", file=sys.stderr)
    return 0


def cmd_eval(args, cfg: EngineConfig) -> int:
    predictions = [rec for _, rec in read_jsonl(args.predictions)]
    gold = [rec for _, rec in read_jsonl(args.gold)]
    try:
        report = evaluate(predictions, gold)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    summary = report.to_record(scale=100.0)
    if args.json:
        print(dumps(summary))
        return 0
    print(f"EM {summary['em']:.1f}  F1 {summary['f1']:.1f}  ({summary['count']} questions)")
    if summary["by_class"]:
        width = max(len(c) for c in summary["by_class"])
        print(f"{'class':<{width}}  {'n':>4}  {'EM':>6}  {'F1':>6}")
        for name, row in summary["by_class"].items():
            print(f"{name:<{width}}  {row['count']:>4}  {row['em']:>6.1f}  {row['f1']:>6.1f}")
    return 0


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON engine configuration")
    common.add_argument("--seed", type=int, help="overrides the config seed")
    common.add_argument("--jobs", type=int, default=1, help="questions processed in parallel")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tmn", description="Question decomposition engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify questions and extract hints")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("datagen", parents=[common], help="emit training data")
    p.add_argument("input")
    p.add_argument("--emit", choices=EMIT_KINDS, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--progress", help="resume file (default: OUTPUT.progress)")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("answer", parents=[common], help="answer questions with explanations")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--greedy", action="store_true", help="follow the single most likely question")
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("eval", parents=[common], help="score predictions against gold answers")
    p.add_argument("predictions")
    p.add_argument("gold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = EngineConfig.load(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        set_default_lexicon(Lexicon(load_stopwords(cfg.stopwords)) if cfg.stopwords else None)
        return args.func(args, cfg)
    except ServiceUnavailable as exc:
        print(f"error: service unavailable: {exc}", file=sys.stderr)
        return 1
    except TMNError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
