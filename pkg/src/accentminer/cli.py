"""Command-line pipeline: convert, pair, align, mine, categorize, kappa,
generate, pipeline.

Also home of the seeded synthetic-corpus generator used to check that
planted substitution rules are recovered by the full pipeline.  Everything
here is deterministic given identical inputs, flags and seed; reports are
plain TSV/UTF-8.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

from . import agreement, aligner, lexicon, mining, rulebook
from .aligner import AlignmentConfig, AlignmentModel, Chunk, format_chunk
from .lexicon import Lexicon, PairedLexicon
from .mining import PRESETS, CONTEXT_ANY, CONTEXTS, MiningConfig
from .phones import ArpabetTable, load_arpabet_table, parse_ipa_string


class PlantedRule(NamedTuple):
    source: Chunk
    target: Chunk
    context: str
    rate: float


class GeneratorError(ValueError):
    pass


def parse_plant_spec(text: str) -> PlantedRule:
    """Parse ``src=tgt@rate`` (phones space-separated, optional ``|context``)."""
    spec = text.strip()
    context = CONTEXT_ANY
    if "|" in spec:
        spec, context = (part.strip() for part in spec.rsplit("|", 1))
        if context not in CONTEXTS:
            raise GeneratorError(f"unknown context {context!r} in plant spec {text!r}")
    if "@" not in spec or "=" not in spec:
        raise GeneratorError(f"plant spec {text!r} is not of the form 'src=tgt@rate'")
    mapping, rate_text = spec.rsplit("@", 1)
    source_text, target_text = mapping.split("=", 1)
    try:
        rate = float(rate_text)
    except ValueError:
        raise GeneratorError(f"bad rate {rate_text!r} in plant spec {text!r}") from None
    return PlantedRule(
        source=tuple(parse_ipa_string(source_text.strip())),
        target=tuple(parse_ipa_string(target_text.strip())),
        context=context,
        rate=rate,
    )


@dataclass
class PlantManifest:
    """True application counts per planted rule."""

    applications: dict[PlantedRule, int] = field(default_factory=dict)
    opportunities: dict[PlantedRule, int] = field(default_factory=dict)

    def write(self, stream) -> None:
        for rule in sorted(self.opportunities, key=lambda r: (r.source, r.target, r.context)):
            stream.write(
                f"{format_chunk(rule.source)}\t{format_chunk(rule.target)}\t{rule.context}\t"
                f"{rule.rate!r}\t{self.applications.get(rule, 0)}\t{self.opportunities[rule]}\n"
            )


def _validate_planted(planted: Sequence[PlantedRule], config: AlignmentConfig) -> None:
    seen: set[tuple[Chunk, str]] = set()
    for rule in planted:
        if not 0.0 < rule.rate <= 1.0:
            raise GeneratorError(f"rate must be in (0, 1], got {rule.rate}")
        if not 1 <= len(rule.source) <= config.max_source_chunk:
            raise GeneratorError(
                f"planted source chunk {format_chunk(rule.source)!r} exceeds configured size"
            )
        if not 1 <= len(rule.target) <= config.max_target_chunk:
            raise GeneratorError(
                f"planted target chunk {format_chunk(rule.target)!r} exceeds configured size"
            )
        key = (rule.source, rule.context)
        if key in seen:
            raise GeneratorError(
                f"two planted rules share source {format_chunk(rule.source)!r} "
                f"and context {rule.context!r}: ground truth would be ambiguous"
            )
        seen.add(key)


def _context_ok(rule: PlantedRule, position: int, length: int) -> bool:
    if rule.context == mining.CONTEXT_INITIAL:
        return position == 0
    if rule.context == mining.CONTEXT_FINAL:
        return position + len(rule.source) == length
    return True


def generate_lexicon(
    base: Lexicon,
    planted: Sequence[PlantedRule],
    seed: int,
    config: AlignmentConfig | None = None,
) -> tuple[Lexicon, PlantManifest]:
    """Apply planted substitution rules to a source lexicon.

    Each word's primary pronunciation is scanned left to right; at a
    position where exactly one rule matches (leftmost-longest wins among
    overlapping matches), the substitution fires with probability equal to
    the rule's rate, drawn from a PRNG seeded once with ``seed``.
    """
    config = config or AlignmentConfig()
    _validate_planted(planted, config)
    rng = random.Random(seed)
    manifest = PlantManifest()
    for rule in planted:
        manifest.applications[rule] = 0
        manifest.opportunities[rule] = 0
    out = Lexicon(source_label=f"synthetic(seed={seed})")
    for word in base.words():
        pron = base.primary(word)
        length = len(pron)
        result: list[str] = []
        i = 0
        while i < length:
            matches = [
                r
                for r in planted
                if pron[i : i + len(r.source)] == r.source and _context_ok(r, i, length)
            ]
            if matches:
                widest = max(len(r.source) for r in matches)
                best = [r for r in matches if len(r.source) == widest]
                if len(best) == 1:
                    rule = best[0]
                    manifest.opportunities[rule] += 1
                    if rng.random() < rule.rate:
                        manifest.applications[rule] += 1
                        result.extend(rule.target)
                        i += len(rule.source)
                        continue
            result.append(pron[i])
            i += 1
        out.add(word, tuple(result))
    return out, manifest


# ---------------------------------------------------------------------------
# pipeline

@dataclass
class PipelineConfig:
    source_dict: Path
    target_lexicon: Path
    table_path: Path | None
    outdir: Path
    rulebook_path: Path | None = None
    source_format: str = "arpabet-dict"
    alignment: AlignmentConfig = field(default_factory=AlignmentConfig)
    mining: MiningConfig = field(default_factory=lambda: PRESETS["broad"])
    preset: str = "broad"
    hide_identity: bool = False
    cross_product: bool = False
    seed: int = 0


def _load_table(path: Path | None) -> ArpabetTable:
    if path is None:
        from importlib import resources

        with resources.files(__package__).joinpath("data/arpabet_ipa.tsv").open(
            encoding="utf-8"
        ) as stream:
            return load_arpabet_table(stream)
    with open(path, encoding="utf-8") as stream:
        return load_arpabet_table(stream)


def _read_lexicon(path: Path, format: str, table: ArpabetTable) -> Lexicon:
    with open(path, encoding="utf-8") as stream:
        lex = lexicon.parse_dictionary(stream, format, table)
    lex.source_label = path.name
    return lex


def run_pipeline(config: PipelineConfig) -> int:
    """parse -> pair -> news -> train -> mine -> categorize, all to outdir."""
    table = _load_table(config.table_path)
    source = _read_lexicon(config.source_dict, config.source_format, table)
    target = _read_lexicon(config.target_lexicon, "ipa-lexicon", table)
    lit = None
    if config.rulebook_path is not None:
        with open(config.rulebook_path, encoding="utf-8") as stream:
            lit = rulebook.load_rulebook(stream)
    else:
        print("notice: no rulebook given, skipping categorization", file=sys.stderr)

    paired = lexicon.pair_lexicons(source, target, cross_product=config.cross_product)
    outdir = config.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "news.tsv", "w", encoding="utf-8") as stream:
        lexicon.write_news_format(paired, stream)
    with open(outdir / "skipped.tsv", "w", encoding="utf-8") as stream:
        lexicon.write_skipped(paired, stream)

    model = aligner.train(paired, config.alignment)
    with open(outdir / "model.tsv", "w", encoding="utf-8") as stream:
        aligner.save_model(model, stream)

    rules = mining.mine(model, paired, config.mining, config.alignment)
    if config.hide_identity:
        rules = mining.drop_identity(rules)
    with open(outdir / "rules.tsv", "w", encoding="utf-8") as stream:
        mining.write_rules(rules, stream)

    if lit is not None:
        occurrences = mining.source_chunk_occurrences(
            paired, max_len=config.alignment.max_source_chunk
        )
        report = rulebook.categorize(rules, lit, occurrences, config.mining)
        with open(outdir / "report.txt", "w", encoding="utf-8") as stream:
            rulebook.write_report(report, stream)
        with open(outdir / "report.tsv", "w", encoding="utf-8") as stream:
            rulebook.write_report_tsv(report, stream)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _add_alignment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-source-chunk", type=int, default=2)
    parser.add_argument("--max-target-chunk", type=int, default=2)
    parser.add_argument(
        "--allow-source-deletion", action=argparse.BooleanOptionalAction, default=True
    )
    parser.add_argument(
        "--allow-target-deletion", action=argparse.BooleanOptionalAction, default=False
    )
    parser.add_argument("--iterations", type=int, default=100, help="max EM iterations")
    parser.add_argument(
        "--tolerance", type=float, default=1e-6, help="relative log-likelihood stop threshold"
    )


def _alignment_config(args: argparse.Namespace) -> AlignmentConfig:
    return AlignmentConfig(
        max_source_chunk=args.max_source_chunk,
        max_target_chunk=args.max_target_chunk,
        allow_source_deletion=args.allow_source_deletion,
        allow_target_deletion=args.allow_target_deletion,
        max_iterations=args.iterations,
        rel_tolerance=args.tolerance,
    )


def _add_mining_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=sorted(PRESETS), default="broad")
    parser.add_argument("--min-support", type=int, default=None)
    parser.add_argument("--min-prob", type=float, default=None)
    parser.add_argument("--contexts", action=argparse.BooleanOptionalAction, default=False)
    parser.add_argument("--hide-identity", action="store_true")


def _mining_config(args: argparse.Namespace) -> MiningConfig:
    preset = PRESETS[args.preset]
    return MiningConfig(
        min_support=args.min_support if args.min_support is not None else preset.min_support,
        min_probability=args.min_prob if args.min_prob is not None else preset.min_probability,
        contexts_enabled=args.contexts,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accentminer",
        description="Mine and validate phone-level pronunciation rules between accents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert an ARPAbet dictionary to an IPA lexicon")
    p.add_argument("--dict", dest="dict_path", type=Path, required=True)
    p.add_argument("--table", type=Path, default=None, help="ARPAbet table (default: bundled)")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("pair", help="pair a source dictionary with a target lexicon")
    p.add_argument("--source-dict", type=Path, required=True)
    p.add_argument(
        "--source-format", choices=["arpabet-dict", "ipa-lexicon"], default="arpabet-dict"
    )
    p.add_argument("--target-lexicon", type=Path, required=True)
    p.add_argument("--table", type=Path, default=None)
    p.add_argument("--news", type=Path, required=True, help="news-format output")
    p.add_argument("--skipped", type=Path, required=True, help="skipped-word report output")
    p.add_argument("--cross-product", action="store_true")

    p = sub.add_parser("align", help="train the chunk alignment model on news-format pairs")
    p.add_argument("--news", type=Path, required=True)
    p.add_argument("--model-out", type=Path, required=True)
    p.add_argument("--label", default="", help="provenance label stored with the model")
    _add_alignment_flags(p)

    p = sub.add_parser("mine", help="mine thresholded substitution rules")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--news", type=Path, required=True)
    p.add_argument("--rules-out", type=Path, required=True)
    p.add_argument("--label", default="", help="provenance label of the news data")
    _add_mining_flags(p)
    _add_alignment_flags(p)

    p = sub.add_parser("categorize", help="bucket mined rules against a literature rulebook")
    p.add_argument("--rules", type=Path, required=True)
    p.add_argument("--rulebook", type=Path, required=True)
    p.add_argument("--news", type=Path, required=True, help="paired data for attestation counts")
    p.add_argument("--report-out", type=Path, required=True, help="human-readable report")
    p.add_argument("--report-tsv-out", type=Path, required=True)
    _add_mining_flags(p)

    p = sub.add_parser("kappa", help="transcription agreement report")
    p.add_argument("--input", type=Path, required=True, help="TSV: pair-id, ipa-a, ipa-b")
    p.add_argument("--out", type=Path, default=None, help="report path (default: stdout)")

    p = sub.add_parser("generate", help="apply planted substitution rules to a lexicon")
    p.add_argument("--base", type=Path, required=True, help="ipa-lexicon to transform")
    p.add_argument(
        "--plant",
        action="append",
        required=True,
        metavar="SRC=TGT@RATE[|CONTEXT]",
        help="planted rule, e.g. 't=ʈ@0.96' (repeatable)",
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--manifest", type=Path, required=True)

    p = sub.add_parser("pipeline", help="run the whole pipeline into an output directory")
    p.add_argument("--source-dict", type=Path, required=True)
    p.add_argument(
        "--source-format", choices=["arpabet-dict", "ipa-lexicon"], default="arpabet-dict"
    )
    p.add_argument("--target-lexicon", type=Path, required=True)
    p.add_argument("--table", type=Path, default=None)
    p.add_argument("--rulebook", type=Path, default=None)
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--cross-product", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    _add_mining_flags(p)
    _add_alignment_flags(p)

    return parser


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_convert(args: argparse.Namespace) -> int:
    table = _load_table(args.table)
    lex = _read_lexicon(args.dict_path, "arpabet-dict", table)
    with open(args.out, "w", encoding="utf-8") as stream:
        lexicon.write_ipa_lexicon(lex, stream)
    return 0


def _cmd_pair(args: argparse.Namespace) -> int:
    table = _load_table(args.table)
    source = _read_lexicon(args.source_dict, args.source_format, table)
    target = _read_lexicon(args.target_lexicon, "ipa-lexicon", table)
    paired = lexicon.pair_lexicons(source, target, cross_product=args.cross_product)
    with open(args.news, "w", encoding="utf-8") as stream:
        lexicon.write_news_format(paired, stream)
    with open(args.skipped, "w", encoding="utf-8") as stream:
        lexicon.write_skipped(paired, stream)
    print(f"paired {len(paired.pairs)} words, skipped {len(paired.skipped)}", file=sys.stderr)
    return 0


def _cmd_align(args: argparse.Namespace) -> int:
    with open(args.news, encoding="utf-8") as stream:
        paired = lexicon.read_news_format(stream, label=args.label)
    model = aligner.train(paired, _alignment_config(args))
    with open(args.model_out, "w", encoding="utf-8") as stream:
        aligner.save_model(model, stream)
    iterations = len(model.log_likelihood_history)
    final = model.log_likelihood_history[-1] if iterations else float("nan")
    print(f"trained {iterations} iterations, log-likelihood {final:.6f}", file=sys.stderr)
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    with open(args.model, encoding="utf-8") as stream:
        model = aligner.load_model(stream)
    label = args.label
    if not label and model.provenance:
        # News files carry no label; an explicit --label asserts the data's
        # identity and is checked against the model's stored provenance.
        print(f"notice: assuming news data is {model.provenance!r}", file=sys.stderr)
        label = model.provenance
    with open(args.news, encoding="utf-8") as stream:
        paired = lexicon.read_news_format(stream, label=label)
    rules = mining.mine(model, paired, _mining_config(args), _alignment_config(args))
    if args.hide_identity:
        rules = mining.drop_identity(rules)
    with open(args.rules_out, "w", encoding="utf-8") as stream:
        mining.write_rules(rules, stream)
    print(f"mined {len(rules)} rules", file=sys.stderr)
    return 0


def _cmd_categorize(args: argparse.Namespace) -> int:
    config = _mining_config(args)
    with open(args.rules, encoding="utf-8") as stream:
        rules = mining.read_rules(stream, config)
    with open(args.rulebook, encoding="utf-8") as stream:
        lit = rulebook.load_rulebook(stream)
    with open(args.news, encoding="utf-8") as stream:
        paired = lexicon.read_news_format(stream)
    occurrences = mining.source_chunk_occurrences(paired)
    report = rulebook.categorize(rules, lit, occurrences, config)
    with open(args.report_out, "w", encoding="utf-8") as stream:
        rulebook.write_report(report, stream)
    with open(args.report_tsv_out, "w", encoding="utf-8") as stream:
        rulebook.write_report_tsv(report, stream)
    return 0


def _cmd_kappa(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as stream:
        items = agreement.read_pairs_tsv(stream)
    report = agreement.mean_kappa(items)
    if args.out is None:
        agreement.write_report(report, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as stream:
            agreement.write_report(report, stream)
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    with open(args.base, encoding="utf-8") as stream:
        base = lexicon.parse_dictionary(stream, "ipa-lexicon")
    planted = [parse_plant_spec(spec) for spec in args.plant]
    synthetic, manifest = generate_lexicon(base, planted, args.seed)
    with open(args.out, "w", encoding="utf-8") as stream:
        lexicon.write_ipa_lexicon(synthetic, stream)
    with open(args.manifest, "w", encoding="utf-8") as stream:
        manifest.write(stream)
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    config = PipelineConfig(
        source_dict=args.source_dict,
        source_format=args.source_format,
        target_lexicon=args.target_lexicon,
        table_path=args.table,
        rulebook_path=args.rulebook,
        outdir=args.outdir,
        alignment=_alignment_config(args),
        mining=_mining_config(args),
        preset=args.preset,
        hide_identity=args.hide_identity,
        cross_product=args.cross_product,
        seed=args.seed,
    )
    return run_pipeline(config)


_COMMANDS = {
    "convert": _cmd_convert,
    "pair": _cmd_pair,
    "align": _cmd_align,
    "mine": _cmd_mine,
    "categorize": _cmd_categorize,
    "kappa": _cmd_kappa,
    "generate": _cmd_generate,
    "pipeline": _cmd_pipeline,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
