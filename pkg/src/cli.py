"""
Interface de linha de comando ``tlgobf``.

Códigos de saída: 0 sucesso (equivalente, função de limiar, SAFE), 1 erro de
uso/E-S/contrato, 2 resultado analítico negativo (NOT_THRESHOLD, UNSAFE),
3 contraexemplo na verificação. Resultados vão para stdout (texto ou, com
``--json``, um registro JSON); logs vão para stderr.

Prioridade de configuração: argv > arquivo ``--config`` > ambiente > padrões.
"""
import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.errors import ContractError, TlgError
from src.logging_setup import configure_logging
from src.logic.boolfn import MAX_VARS, TruthTable
from src.logic.threshold import NOT_THRESHOLD, identify
from src.netlist.bench import generate_bench
from src.netlist.blif import emit, read_blif, write_blif
from src.netlist.hybridize import DEFAULT_CUT_LIMIT, hybridize
from src.netlist.model import netlist_stats
from src.race.margin import safety_check, worst_case_margin
from src.race.yield_mc import monte_carlo_yield
from src.sim.equiv import check_equivalence
from src.sim.power import power_proxy
from src.sim.simulator import Simulator
from src.sim.stimulus import DEFAULT_TOGGLE_PROBABILITY, measured_toggle_rate, toggle_stimulus
from src.sim.vcd import write_vcd
from src.structlog_support import get_structlog_logger
from src.tlg.keyfile import dump_key, load_key
from src.tlg.mapping import default_inputs, map_truth_table
from src.tlg.obfuscate import (
    ObfuscationKey,
    ambiguity_report,
    attacker_candidates,
    obfuscate_instance,
    obfuscation_space,
    table_reading_space,
)
from src.tlg.slots import CellVariant, DifferentialSpec
from src.utils.config import load_config_file, load_config_from_env

logger = get_structlog_logger(component="cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_COUNTEREXAMPLE = 3

DEFAULT_SEED = 42
LOG_LEVELS = ("WARNING", "INFO", "DEBUG")

Result = Tuple[int, Dict[str, Any], List[str]]


class _Parser(argparse.ArgumentParser):
    """Erros de uso saem com código 1 (o argparse usaria 2, reservado a resultados negativos)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    seed: int
    seed_source: str
    threads: Optional[int] = None
    weight_bound: Optional[int] = None
    json: bool = False
    verbosity: int = 0
    log_format: str = "text"
    log_level: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Any:
        return self.options[name]


def resolve_seed(raw: Any) -> Tuple[int, bool]:
    """Retorna (seed, sorteada)."""
    if isinstance(raw, int) and not isinstance(raw, bool):
        value = raw
    elif str(raw).strip().lower() == "random":
        return random.SystemRandom().randrange(2 ** 31), True
    else:
        try:
            value = int(str(raw).strip())
        except ValueError:
            raise ContractError(f"Seed must be an integer or 'random', got {raw!r}")
    if value < 0:
        raise ContractError(f"Seed must be non-negative, got {value}")
    return value, False


def _optional_int(name: str, value: Any) -> Optional[int]:
    if value is None:
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ContractError(f"{name} must be an integer, got {value!r}")


def build_run_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = load_config_file(args.config) or {}
    env = load_config_from_env()

    def pick(name: str, default: Any = None) -> Tuple[Any, str]:
        value = getattr(args, name, None)
        if value is not None:
            return value, "argv"
        if file_cfg.get(name) is not None:
            return file_cfg[name], "config"
        if env.get(name) is not None:
            return env[name], "env"
        return default, "default"

    raw_seed, source = pick("seed", DEFAULT_SEED)
    seed, drawn = resolve_seed(raw_seed)
    if drawn:
        source = "random"
        print(f"seed: {seed}", file=sys.stderr)
    threads, _ = pick("threads")
    weight_bound, _ = pick("weight_bound")
    log_format, _ = pick("log_format", "text")
    log_level = file_cfg.get("log_level") or os.getenv("LOG_LEVEL")

    options: Dict[str, Any] = {}
    for name, default in getattr(args, "_defaults", {}).items():
        value = getattr(args, name, None)
        if value is None:
            value = file_cfg.get(name, default)
        options[name] = value
    return RunConfig(
        command=args.command,
        seed=seed,
        seed_source=source,
        threads=_optional_int("threads", threads),
        weight_bound=_optional_int("weight_bound", weight_bound),
        json=args.json,
        verbosity=args.verbose,
        log_format=log_format,
        log_level=log_level,
        options=options,
    )


def _setup_logging(cfg: RunConfig) -> None:
    if cfg.verbosity:
        level = LOG_LEVELS[min(cfg.verbosity, len(LOG_LEVELS) - 1)]
    else:
        level = cfg.log_level or "WARNING"
    configure_logging(log_format=cfg.log_format, log_level=level.upper(), use_structlog=True)


# -- auxiliares ----------------------------------------------------------------


def _table(args) -> TruthTable:
    if not 0 <= args.vars <= MAX_VARS:
        raise ContractError(f"--vars must be in 0..{MAX_VARS}, got {args.vars}")
    return TruthTable.from_hex(args.tt, args.vars)


def _map(args, cfg: RunConfig, k: int):
    tt = _table(args)
    return tt, map_truth_table(tt, default_inputs(tt.var_count), k=k, weight_bound=cfg.weight_bound)


def _variant(spec: DifferentialSpec, k: int) -> CellVariant:
    variant = CellVariant(spec.cell_size, k)
    if not variant.in_library:
        logger.warning("Variante fora da biblioteca", variant=variant.name)
    return variant


def _decoy_pool(args, inputs: Sequence[str], fresh: int) -> List[str]:
    if args.decoys:
        return [net.strip() for net in args.decoys.split(",") if net.strip()]
    if fresh:
        return [f"d{i}" for i in range(fresh)]
    return list(inputs)


def _not_threshold(tt: TruthTable, command: str) -> Result:
    record = {"command": command, "table": tt.to_hex(), "vars": tt.var_count,
              "threshold": False, "result": NOT_THRESHOLD}
    return EXIT_NEGATIVE, record, [NOT_THRESHOLD]


# -- subcomandos ---------------------------------------------------------------


def cmd_identify(args, cfg: RunConfig) -> Result:
    tt = _table(args)
    tf = identify(tt, weight_bound=cfg.weight_bound)
    if tf is None:
        return _not_threshold(tt, "identify")
    record = {"command": "identify", "table": tt.to_hex(), "vars": tt.var_count, "threshold": True,
              "result": str(tf), "weights": list(tf.weights), "T": tf.threshold}
    return EXIT_OK, record, [str(tf)]


def cmd_map(args, cfg: RunConfig) -> Result:
    k = cfg["k"]
    tt, mapped = _map(args, cfg, k)
    if mapped is None:
        return _not_threshold(tt, "map")
    spec = mapped.spec
    record = {
        "command": "map", "table": tt.to_hex(), "vars": tt.var_count,
        "function": str(mapped.function), "doubled": str(mapped.doubled),
        "cell_size": spec.cell_size, "k": k,
        "left": [s.token for s in spec.left], "right": [s.token for s in spec.right],
        "render": spec.render(),
    }
    return EXIT_OK, record, [spec.render()]


def cmd_obfuscate(args, cfg: RunConfig) -> Result:
    k = cfg["k"]
    tt, mapped = _map(args, cfg, k)
    if mapped is None:
        return _not_threshold(tt, "obfuscate")
    variant = _variant(mapped.spec, k)
    pool = _decoy_pool(args, mapped.spec.inputs, cfg["fresh_decoys"])
    keyed, entry = obfuscate_instance(mapped.spec, variant, pool, cfg.seed)
    key = ObfuscationKey(seed=cfg.seed)
    key.add(args.name, entry)
    if args.key:
        dump_key(key, args.key)
    visible = keyed.visible()
    record = {
        "command": "obfuscate", "table": tt.to_hex(), "vars": tt.var_count, "seed": cfg.seed,
        "instance": args.name, "variant": variant.name, "render": visible.render(),
        "space": obfuscation_space(variant.n, variant.k), "key_file": args.key,
    }
    lines = [visible.render(), f"variant {variant.name}  space {record['space']}"]
    if len(keyed.variables()) <= MAX_VARS:
        record["candidates"] = len(attacker_candidates(keyed, variant))
        lines.append(f"candidates {record['candidates']}")
    return EXIT_OK, record, lines


def cmd_attack(args, cfg: RunConfig) -> Result:
    nl = read_blif(args.netlist)
    stages = {
        name: (stage.spec, stage.variant)
        for inst in nl.tlgs.values()
        for name, stage in inst.named_stages()
    }
    if args.instance:
        selected = {n: v for n, v in stages.items() if n == args.instance or n.startswith(args.instance + ".")}
        if not selected:
            raise ContractError(f"No TLG instance named '{args.instance}'")
        stages = selected
    report = ambiguity_report(stages, prune_ties=args.prune_ties)
    record: Dict[str, Any] = {"command": "attack", "netlist": args.netlist, "prune_ties": args.prune_ties}
    record.update(report.to_dict())
    lines = [f"{name}: {count} candidates" for name, count in sorted(report.candidates.items())]
    if args.instance and len(stages) == 1:
        (name, (spec, variant)), = stages.items()
        if variant.k and name in report.candidates:
            tables = attacker_candidates(spec, variant, args.prune_ties)
            record["variables"] = list(spec.variables())
            record["candidates"] = sorted(tt.to_hex() for tt in tables)
            lines.append("variables " + ",".join(spec.variables()))
            lines.extend(record["candidates"])
    lines.append(f"ambiguity {report.product} (2^{report.log2_product:.2f}), "
                 f"{report.ambiguous} of {report.obfuscated} instances ambiguous")
    return EXIT_OK, record, lines


def cmd_space(args, cfg: RunConfig) -> Result:
    n, k = args.n, args.k
    space = obfuscation_space(n, k)
    # a leitura da tabela só existe quando k <= N
    reading = table_reading_space(n, k) if k <= n else None
    record = {"command": "space", "n": n, "k": k, "space": space, "table_reading": reading,
              "discrepancy": reading is not None and space != reading}
    lines = [str(space)]
    if args.explain:
        lines.append(f"C({n}+{k},{k})^2 = {space}: hypotheses over {n + k} physical slots per side")
        if reading is None:
            lines.append(f"C({n},{k})^2 = N/A: library table reading needs k <= {n}")
        else:
            lines.append(f"C({n},{k})^2 = {reading}: library table reading")
        if record["discrepancy"]:
            lines.append(f"discrepancy: the two readings differ by {space - reading}")
    return EXIT_OK, record, lines


def cmd_safety(args, cfg: RunConfig) -> Result:
    variant = CellVariant(args.n, args.k)
    if not variant.in_library:
        logger.warning("Variante fora da biblioteca", variant=variant.name)
    result = safety_check(variant)
    record = {"command": "safety"}
    record.update(result.to_dict())
    line = result.verdict if result.safe else f"UNSAFE (maxSafeK={result.max_safe_k})"
    code = EXIT_OK if result.safe else EXIT_NEGATIVE
    return code, record, [line, f"maxSafeK {result.max_safe_k}"]


def cmd_yield(args, cfg: RunConfig) -> Result:
    k = cfg["k"]
    tt, mapped = _map(args, cfg, k)
    if mapped is None:
        return _not_threshold(tt, "yield")
    variant = _variant(mapped.spec, k)
    pool = _decoy_pool(args, mapped.spec.inputs, 2 * k)
    keyed, _ = obfuscate_instance(mapped.spec, variant, pool, cfg.seed)
    result = monte_carlo_yield(keyed, trials=cfg["trials"], seed=cfg.seed,
                               sigma_scale=cfg["sigma_scale"], threads=cfg.threads)
    worst = worst_case_margin(keyed)
    record = {"command": "yield", "table": tt.to_hex(), "vars": tt.var_count, "variant": variant.name,
              "worst_case_margin_ua": worst}
    record.update(result.to_dict())
    lines = [
        f"yield {result.value:.6f} ({result.passes}/{result.trials})",
        f"ci95 [{result.ci_low:.6f}, {result.ci_high:.6f}]",
        f"min margin {result.min_margin:.4f} uA",
        f"worst-case nominal margin {worst:.4f} uA",
    ]
    return EXIT_OK, record, lines


def cmd_simulate(args, cfg: RunConfig) -> Result:
    nl = read_blif(args.input)
    key = load_key(args.key) if args.key else None
    stimulus = toggle_stimulus(len(nl.inputs), cfg["cycles"], cfg["lanes"], cfg["activity"], cfg.seed)
    record_lane = 0 if (args.vcd or args.trace) else None
    result = Simulator(nl, key).run(stimulus, record_lane=record_lane)
    power = power_proxy(result.activity)
    rate = measured_toggle_rate(stimulus)
    record: Dict[str, Any] = {
        "command": "simulate", "netlist": args.input, "seed": cfg.seed,
        "cycles": result.activity.cycles, "lanes": result.activity.lanes,
        "toggle_probability": cfg["activity"], "measured_toggle_rate": rate,
        "power": power.to_dict(),
    }
    lines = [
        f"cycles {power.cycles} lanes {power.lanes} seed {cfg.seed}",
        f"input toggle rate {rate:.4f}",
        f"cmos toggles {power.cmos_toggles}",
        f"tlg evaluations {power.tlg_evaluations} (per-cycle variance {power.tlg_cycle_variance:g})",
    ]
    if args.trace:
        trace = result.trace(0)
        record["trace"] = trace
        lines.extend(
            f"{t} " + "".join(str(row[name]) for name in result.output_names) for t, row in enumerate(trace)
        )
    if args.vcd:
        write_vcd(result, args.vcd)
        record["vcd"] = args.vcd
    return EXIT_OK, record, lines


def cmd_verify(args, cfg: RunConfig) -> Result:
    a = read_blif(args.orig)
    b = read_blif(args.hybrid)
    key_a = load_key(args.orig_key) if args.orig_key else None
    key_b = load_key(args.key) if args.key else None
    result = check_equivalence(
        a, b, key_a, key_b,
        mode=cfg["mode"], depth=cfg["depth"], vectors=cfg["vectors"], seed=cfg.seed,
        probability=cfg["activity"],
        threads=cfg.threads,
    )
    record: Dict[str, Any] = {"command": "verify"}
    record.update(result.to_dict())
    record["seed"] = cfg.seed
    if cfg["mode"] == "random":
        record["toggle_probability"] = cfg["activity"]
    if result.equivalent:
        return EXIT_OK, record, [result.verdict.value]
    path = args.cex or f"{args.hybrid}.cex.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(result.counterexample.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    record["counterexample_file"] = path
    cex = result.counterexample
    line = f"COUNTEREXAMPLE at cycle {cex.cycle} lane {cex.lane} ({cex.reason}); trace written to {path}"
    return EXIT_COUNTEREXAMPLE, record, [line]


def cmd_stats(args, cfg: RunConfig) -> Result:
    nl = read_blif(args.input)
    stats = netlist_stats(nl)
    record: Dict[str, Any] = {"command": "stats", "netlist": args.input, "name": nl.name,
                              "inputs": len(nl.inputs), "outputs": len(nl.outputs),
                              "sequential_depth": nl.sequential_depth()}
    record.update(stats.to_dict())
    lines = [f"{key} {value}" for key, value in record.items() if key not in ("command", "netlist")]
    return EXIT_OK, record, lines


def cmd_bench(args, cfg: RunConfig) -> Result:
    nl = generate_bench(args.kind, cfg["width"], taps=cfg["taps"], stages=cfg["stages"], verify=not args.no_verify)
    text = emit(nl)
    if args.out:
        write_blif(nl, args.out)
    record: Dict[str, Any] = {"command": "bench", "kind": args.kind, "width": cfg["width"],
                              "stages": cfg["stages"], "taps": cfg["taps"] if args.kind == "fir" else None,
                              "out": args.out, "stats": netlist_stats(nl).to_dict()}
    if args.out:
        return EXIT_OK, record, [f"wrote {args.out}"]
    record["blif"] = text
    return EXIT_OK, record, [text.rstrip("\n")]


def cmd_hybridize(args, cfg: RunConfig) -> Result:
    nl = read_blif(args.input)
    result = hybridize(nl, max_inputs=cfg["max_inputs"], k=cfg["k"], xor_macro=args.xor_macro,
                       seed=cfg.seed, threads=cfg.threads, cut_limit=cfg["cut_limit"])
    out = result.netlist
    if args.key:
        dump_key(result.key, args.key)
        out.keyfile = os.path.basename(args.key)
    write_blif(out, args.out)
    report = result.report
    record: Dict[str, Any] = {"command": "hybridize", "seed": cfg.seed, "out": args.out, "key_file": args.key,
                              "key_entries": len(result.key)}
    record.update(report.to_dict())
    lines = [
        f"tlgs {report.tlgs} ({', '.join(f'{v} x{c}' for v, c in sorted(report.by_variant.items())) or '-'})",
        f"combinational cells {report.combinational_before} -> {report.combinational_after}",
        f"key entries {len(result.key)} seed {cfg.seed}",
    ]
    return EXIT_OK, record, lines


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], Result]] = {
    "identify": cmd_identify,
    "map": cmd_map,
    "obfuscate": cmd_obfuscate,
    "attack": cmd_attack,
    "space": cmd_space,
    "safety": cmd_safety,
    "yield": cmd_yield,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "stats": cmd_stats,
    "bench": cmd_bench,
    "hybridize": cmd_hybridize,
}


# -- parser --------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON record on stdout")
    common.add_argument("--seed", default=None, help="integer seed or 'random' (default 42)")
    common.add_argument("--threads", type=int, default=None, help="worker cap")
    common.add_argument("--weight-bound", dest="weight_bound", type=int, default=None)
    common.add_argument("--config", default=None, help="YAML or JSON file with defaults")
    common.add_argument("--log-format", dest="log_format", choices=("text", "json"), default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def _add(sub, name: str, common, help_text: str, **defaults):
    parser = sub.add_parser(name, parents=[common], help=help_text)
    parser.set_defaults(_defaults=defaults)
    return parser


def _function_args(parser) -> None:
    parser.add_argument("--tt", required=True, help="truth table in hex, bit i = f at index i")
    parser.add_argument("--vars", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tlgobf", description="Threshold-logic synthesis and obfuscation toolchain")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = _add(sub, "identify", common, "identify a threshold function")
    _function_args(p)
    p.add_argument("--bound", dest="weight_bound", type=int, default=None)

    p = _add(sub, "map", common, "map a threshold function to a TLG cell", k=0)
    _function_args(p)
    p.add_argument("--k", type=int, default=None)

    p = _add(sub, "obfuscate", common, "map and obfuscate a single TLG", k=2, fresh_decoys=0)
    _function_args(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--decoys", default=None, help="comma-separated decoy nets")
    p.add_argument("--fresh-decoys", dest="fresh_decoys", type=int, default=None)
    p.add_argument("--name", default="tlg0")
    p.add_argument("--key", default=None, help="key file to write")

    p = _add(sub, "attack", common, "enumerate attacker candidate functions")
    p.add_argument("--netlist", required=True)
    p.add_argument("--instance", default=None)
    p.add_argument("--prune-ties", dest="prune_ties", action="store_true")

    p = _add(sub, "space", common, "size of the obfuscation space")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--explain", action="store_true")

    p = _add(sub, "safety", common, "check decoy strength against the logical margin")
    p.add_argument("--n", type=int, required=True, help="valid inputs of the cell (3, 5, 7 or 9)")
    p.add_argument("--k", type=int, required=True)

    p = _add(sub, "yield", common, "Monte Carlo functional yield", k=2, trials=10_000, sigma_scale=1.0)
    _function_args(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--sigma-scale", dest="sigma_scale", type=float, default=None)
    p.add_argument("--decoys", default=None, help="comma-separated decoy nets")

    p = _add(sub, "simulate", common, "cycle simulation with activity report", cycles=100, lanes=1,
             activity=DEFAULT_TOGGLE_PROBABILITY)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--key", default=None)
    p.add_argument("--cycles", type=int, default=None)
    p.add_argument("--lanes", type=int, default=None)
    p.add_argument("--activity", type=float, default=None, help="per-input toggle probability")
    p.add_argument("--vcd", default=None)
    p.add_argument("--trace", action="store_true")

    p = _add(sub, "verify", common, "sequential equivalence check", mode="exhaustive", depth=2, vectors=100_000,
             activity=DEFAULT_TOGGLE_PROBABILITY)
    p.add_argument("--orig", required=True)
    p.add_argument("--hybrid", required=True)
    p.add_argument("--key", default=None)
    p.add_argument("--orig-key", dest="orig_key", default=None)
    p.add_argument("--mode", choices=("exhaustive", "random"), default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--vectors", type=int, default=None)
    p.add_argument("--cex", default=None, help="counterexample trace file")
    p.add_argument("--activity", type=float, default=None, help="per-input toggle probability in random mode")

    p = _add(sub, "stats", common, "netlist statistics")
    p.add_argument("--in", dest="input", required=True)

    p = _add(sub, "bench", common, "generate a benchmark netlist", width=8, stages=2, taps=4)
    p.add_argument("kind", choices=("wallace", "fir"))
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--stages", type=int, default=None)
    p.add_argument("--taps", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--no-verify", dest="no_verify", action="store_true")

    p = _add(sub, "hybridize", common, "replace flops and threshold cones by obfuscated TLGs",
             k=2, max_inputs=9, cut_limit=DEFAULT_CUT_LIMIT)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--key", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--max-inputs", dest="max_inputs", type=int, default=None)
    p.add_argument("--cut-limit", dest="cut_limit", type=int, default=None)
    p.add_argument("--xor-macro", dest="xor_macro", action="store_true")
    return parser


def _emit(record: Dict[str, Any], lines: List[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(record, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _fail(exc: BaseException, as_json: bool) -> int:
    code = getattr(exc, "code", None) if isinstance(exc, TlgError) else "io"
    message = str(exc)
    print(f"tlgobf: error: {message}", file=sys.stderr)
    if as_json:
        print(json.dumps({"error": code, "message": message}, sort_keys=True))
    return EXIT_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    as_json = bool(getattr(args, "json", False))
    try:
        cfg = build_run_config(args)
        _setup_logging(cfg)
        code, record, lines = COMMANDS[cfg.command](args, cfg)
    except (TlgError, OSError) as exc:
        return _fail(exc, as_json)
    _emit(record, lines, as_json)
    logger.debug("Comando concluído", command=cfg.command, exit_code=code, seed_source=cfg.seed_source)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
