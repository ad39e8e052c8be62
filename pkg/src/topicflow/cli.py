"""Command line pipeline: ``topicflow <subcommand> --input corpus.jsonl --out DIR``.

Each subcommand runs the stages it depends on and writes its own outputs into
the output directory. The fitted model is cached under ``DIR/model`` keyed by
a hash of the training matrix and the fit parameters, so analysis-only reruns
skip the factorization.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Callable

from . import export
from ._accel import numba_enabled
from .analysis import (
    coreness_grid,
    community_topic_summary,
    flow_matrix,
    pagerank,
    small_world_metrics,
    walktrap,
)
from .analysis.flows import TOP_FLOWS
from .analysis.kcore import grid_array
from .analysis.pagerank import ranked
from .corpus import Corpus, load_corpus
from .errors import ParameterError, StageError, TopicFlowError
from .textprep import DocTermMatrix, build_matrix, load_stopwords
from .tfn import TopicFlowNetwork, build_tfn, restrict, write_edge_list
from .topicmodel import TopicModel, corpus_theta, fit_nmf, load_model, save_model

log = logging.getLogger("topicflow")

# nonzero exit status per failing stage
EXIT_CODES = {
    "config": 2,
    "ingest": 3,
    "textprep": 4,
    "topicmodel": 5,
    "tfn": 6,
    "analysis": 7,
    "export": 8,
}


@dataclass(frozen=True)
class RunConfig:
    input: str | None = None
    stopwords: str | None = None  # None: bundled English list
    english_threshold: float = 0.10
    require_abstract: bool = True
    min_df: int = 2
    topics: int = 64
    max_iter: int = 200
    tol: float = 1e-4
    window: int = 2
    top_l: int = 8
    seed: int = 0
    min_year: int = 1960
    max_year: int = 2021
    include_fields: str = ""
    exclude_fields: str = ""
    walk_length: int = 4
    top_flows: int = TOP_FLOWS
    out: str = "topicflow-out"

    def validate(self) -> None:
        if not 0.0 <= self.english_threshold <= 1.0:
            raise ParameterError("english_threshold must lie in [0, 1]")
        for name in ("topics", "top_l", "max_iter", "walk_length", "top_flows", "min_df"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1")
        if self.window < 0:
            raise ParameterError("window must be >= 0")
        if self.min_year > self.max_year:
            raise ParameterError("min_year exceeds max_year")

    def manifest_view(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if "bool" in kind:
        low = raw.strip().lower()
        if low not in ("1", "0", "true", "false", "yes", "no"):
            raise ParameterError(f"{name}: expected a boolean, got {raw!r}")
        return low in ("1", "true", "yes")
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


def read_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment. Keys may use ``-`` or ``_``."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise ParameterError(f"{path}:{lineno}: cannot parse {line!r}")
        out[key] = _coerce(key, value.strip())
    return out


# -- stages --------------------------------------------------------------------


class Pipeline:
    """Lazily evaluated stages sharing one configuration and output directory."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.out = Path(config.out)
        self.written: list[str] = []
        self._cache: dict[str, object] = {}

    def _stage(self, name: str, fn: Callable):
        if name not in self._cache:
            try:
                self._cache[name] = fn()
            except StageError:
                raise
            except (OSError, ValueError, FloatingPointError, KeyError, TopicFlowError) as exc:
                raise StageError(_TAGS[name], exc) from exc
        return self._cache[name]

    def _path(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        if name not in self.written:
            self.written.append(name)
        return self.out / name

    # ingest
    def corpus(self) -> Corpus:
        def run():
            c = self.config
            if not c.input:
                raise ParameterError("--input is required")
            split = lambda s: tuple(x.strip() for x in s.split(",") if x.strip())
            corpus = load_corpus(c.input, c.min_year, c.max_year, split(c.include_fields), split(c.exclude_fields))
            self._path("corpus_report.txt").write_text(f"{corpus.report}\n", encoding="utf-8")
            return corpus

        return self._stage("corpus", run)

    def stopwords(self) -> frozenset[str]:
        return self._stage("stopwords", lambda: load_stopwords(self.config.stopwords))

    def matrix(self) -> DocTermMatrix:
        def run():
            c = self.config
            return build_matrix(self.corpus(), self.stopwords(), c.english_threshold, c.require_abstract, c.min_df)

        return self._stage("matrix", run)

    def model(self) -> TopicModel:
        def run():
            c = self.config
            m = self.matrix()
            key = _matrix_key(m, c)
            mdir = self.out / "model"
            if (mdir / "key").is_file() and (mdir / "key").read_text(encoding="utf-8").strip() == key:
                log.info("model cache hit %s", key[:12])
                model = load_model(mdir)
            else:
                model = fit_nmf(m, c.topics, c.max_iter, c.tol, c.seed)
                save_model(model, mdir)
                (mdir / "key").write_text(key + "\n", encoding="utf-8")
            for f in ("topic_term.tsv", "doc_topic.tsv", "meta", "key"):
                self._path(f"model/{f}")
            return model

        return self._stage("model", run)

    def tfn(self) -> TopicFlowNetwork:
        def run():
            c = self.config
            model = self.model()
            theta = corpus_theta(self.corpus(), model, self.stopwords(), c.english_threshold)
            net = build_tfn(
                self.corpus(), theta, window=c.window, top_l=c.top_l, n_topics=model.n_topics,
                model_id=(self.out / "model" / "key").read_text(encoding="utf-8").strip()[:16],
            )
            write_edge_list(net, self._path("tfn_edges.tsv"))
            return net

        return self._stage("tfn", run)

    # analyses
    def run_pagerank(self) -> None:
        def run():
            scores = pagerank(self.tfn())
            export.write_pagerank_csv(self._path("pagerank.csv"), ranked(scores))

        self._stage("pagerank", run)

    def run_communities(self) -> None:
        def run():
            net = self.tfn()
            summaries = {}
            for y in net.years:
                part = walktrap(restrict(net, year=y), self.config.walk_length)
                summaries[y] = community_topic_summary(part, net.expertise, year=y)
            export.write_communities_csv(self._path("communities.csv"), summaries)
            export.write_community_sizes_csv(self._path("community_sizes.csv"), summaries)

        self._stage("communities", run)

    def run_kcores(self) -> None:
        def run():
            net = self.tfn()
            grid = grid_array(coreness_grid(net), net.n_topics, net.years)
            export.write_core_grid_csv(self._path("core_grid.csv"), grid, net.years)

        self._stage("kcores", run)

    def flows(self) -> dict:
        def run():
            net = self.tfn()
            out = {}
            for y in net.years:
                out[y] = flow_matrix(net, net.expertise, y)
                export.write_flow_csv(self._path(f"flows_{y}.csv"), out[y])
            return out

        return self._stage("flows", run)

    def run_metrics(self) -> None:
        def run():
            net = self.tfn()
            rows = []
            for (y, t) in sorted(net.edges):
                asp, alc = small_world_metrics(restrict(net, y, t))
                rows.append((y, t, asp, alc))
            export.write_metrics_csv(self._path("metrics.csv"), rows)

        self._stage("metrics", run)

    def run_sankey(self) -> None:
        def run():
            model = self.model()
            for y, fm in self.flows().items():
                doc = export.export_sankey(fm, model, self.config.top_flows)
                self._path(f"sankey_{y}.json").write_text(doc.to_json(), encoding="utf-8")

        self._stage("sankey", run)

    def manifest(self) -> dict:
        def run():
            view = self.config.manifest_view()
            view["accelerator"] = "numba" if numba_enabled() else "numpy"
            return export.write_manifest(self.out, view, self.config.seed, self.written)

        return self._stage("manifest", run)


_TAGS = {
    "corpus": "ingest",
    "stopwords": "textprep",
    "matrix": "textprep",
    "model": "topicmodel",
    "tfn": "tfn",
    "pagerank": "analysis",
    "communities": "analysis",
    "kcores": "analysis",
    "flows": "analysis",
    "metrics": "analysis",
    "sankey": "export",
    "manifest": "export",
}


def _matrix_key(m: DocTermMatrix, c: RunConfig) -> str:
    h = hashlib.sha256()
    h.update("\x1f".join(m.rows).encode())
    h.update(b"\x1e")
    h.update("\x1f".join(m.vocabulary.terms).encode())
    v = m.values
    for arr in (v.indptr, v.indices, v.data):
        h.update(arr.astype(arr.dtype.newbyteorder("<")).tobytes())
    h.update(json.dumps([c.topics, c.max_iter, c.tol, c.seed]).encode())
    return h.hexdigest()


def _vectorize(p: Pipeline) -> None:
    p._stage("matrix_tsv", lambda: p.matrix().to_tsv(p._path("matrix.tsv")))


def _run_all(p: Pipeline) -> None:
    p.run_pagerank()
    p.run_communities()
    p.run_kcores()
    p.run_metrics()
    p.run_sankey()
    p.manifest()


COMMANDS: dict[str, tuple[str, Callable[[Pipeline], object]]] = {
    "ingest": ("load and validate the corpus", Pipeline.corpus),
    "vectorize": ("build the tf-idf matrix", _vectorize),
    "fit-topics": ("fit the NMF topic model", Pipeline.model),
    "build-tfn": ("build the Topic Flow Network edge list", Pipeline.tfn),
    "pagerank": ("PageRank on flipped edges", Pipeline.run_pagerank),
    "communities": ("Walktrap communities per year", Pipeline.run_communities),
    "kcores": ("coreness grid (topics x years)", Pipeline.run_kcores),
    "flows": ("per-year topic flow matrices", Pipeline.flows),
    "metrics": ("ASP/ALC per (year, topic)", Pipeline.run_metrics),
    "export-sankey": ("per-year Sankey JSON documents", Pipeline.run_sankey),
    "run": ("full pipeline plus manifest", _run_all),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # default=None everywhere so that only explicitly given flags override the config file
    a = common.add_argument
    a("--config", help="flat key=value file; flags win over it")
    a("--input", help="JSON Lines corpus")
    a("--stopwords", help="stop-word file (default: bundled English list)")
    a("--english-threshold", type=float, default=None)
    a("--require-abstract", dest="require_abstract", action="store_true", default=None)
    a("--no-require-abstract", dest="require_abstract", action="store_false")
    a("--min-df", type=int, default=None)
    a("--topics", type=int, default=None)
    a("--max-iter", type=int, default=None)
    a("--tol", type=float, default=None)
    a("--window", type=int, default=None)
    a("--top-l", type=int, default=None)
    a("--seed", type=int, default=None)
    a("--min-year", type=int, default=None)
    a("--max-year", type=int, default=None)
    a("--include-fields", default=None, help="comma separated")
    a("--exclude-fields", default=None, help="comma separated")
    a("--walk-length", type=int, default=None)
    a("--top-flows", type=int, default=None)
    a("--out", default=None)
    a("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="topicflow", description="Topic Flow Network toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (helptext, _) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=helptext)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    cfg = replace(RunConfig(), **values)
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = resolve_config(args)
    except (OSError, ValueError, TopicFlowError) as exc:
        print(f"error [config] {exc}", file=sys.stderr)
        return EXIT_CODES["config"]
    pipeline = Pipeline(config)
    try:
        COMMANDS[args.command][1](pipeline)
    except StageError as exc:
        print(f"error {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.stage, 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
