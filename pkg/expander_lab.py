"""
Expander Lab
Command-line entry point: builds families, certifies them and runs spectral, character and
random-walk experiments, writing versioned artifacts to an output directory.
"""

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from characters import character_table, roichman_bound_scan
from construction import CubeConstruction, GeneratingFamily
from experiment_config import (SCHEMA_VERSION, TOOL_VERSION, ConfigError, ConfigManager, CertificationError,
                               ExitCode, ExperimentConfig, ExportFormat, FamilyKind, LabError, SolverError)
from family_validator import FamilyValidator
from perm_core import parse_permutation
from spectral_lab import (BRUTE_FORCE_MAX_VERTICES, GraphKind, brute_force_expansion, build_action_graph,
                          cheeger_interval, delta_power_probe, graph_to_dot, graph_to_matrix_market, kazhdan_numeric,
                          kazhdan_to_expansion, random_cayley_baseline, second_eigenvalue)
from walks import cycle_statistics, default_word_length, point_mixing_exact, transitivity_probe

logger = logging.getLogger("expander_lab")

SUBCOMMANDS = ("construct", "certify", "spectrum", "expansion", "kazhdan", "chars", "walk",
               "baseline", "report", "export")


class BracketFormatter(logging.Formatter):
    """Formats records as "[LEVEL] message"."""

    def format(self, record: logging.LogRecord) -> str:
        return f"[{record.levelname}] {record.getMessage()}"


def configure_logging(verbose: bool = False):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(BracketFormatter())
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


class ExpanderLab:
    """
    Runs one experiment per subcommand and writes its artifacts.
    """

    def __init__(self, config: ExperimentConfig, out_dir: Path, family_path: Optional[Path] = None,
                 drop: Optional[List[int]] = None):
        """
        Initialize the lab.

        Args:
            config: validated experiment config
            out_dir: artifact directory (created when missing)
            family_path: family file to use instead of constructing one
            drop: indices of family elements to remove before use
        """
        self.config = config
        self.out_dir = Path(out_dir)
        self.family_path = family_path
        self.drop = sorted(set(drop or []), reverse=True)
        self._construction: Optional[CubeConstruction] = None
        self._family: Optional[GeneratingFamily] = None
        self.written: List[Path] = []

    @property
    def construction(self) -> CubeConstruction:
        if self._construction is None:
            self._construction = CubeConstruction(self.config)
        return self._construction

    @property
    def family(self) -> GeneratingFamily:
        if self._family is None:
            if self.family_path is not None:
                try:
                    family = GeneratingFamily.from_json(Path(self.family_path).read_text())
                except (OSError, ValueError, KeyError) as exc:
                    raise ConfigError(f"Cannot read family {self.family_path}: {exc}") from exc
            else:
                family = self.construction.family()
            for index in self.drop:
                if not 0 <= index < len(family):
                    raise ConfigError(f"Cannot drop element {index} of a {len(family)}-element family")
                family = family.without(index)
            self._family = family
        return self._family

    # ------------------------------------------------------------------
    # Artifact plumbing
    # ------------------------------------------------------------------

    def envelope(self, artifact: str, result: Dict[str, Any]) -> Dict[str, Any]:
        """Versioned document with the config snapshot needed to replay the run."""
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "artifact": artifact,
            "seed": self.config.seed,
            "config": self.config.to_dict(),
            "result": result,
        }

    def write(self, name: str, text: str, started: Optional[float] = None) -> Path:
        """Write an artifact and, when timed, its <name>.timing.json sidecar."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_text(text)
        self.written.append(path)
        if started is not None:
            timing = {
                "schema_version": SCHEMA_VERSION,
                "artifact": name,
                "wall_clock_seconds": time.perf_counter() - started,
                "finished_at": datetime.now(timezone.utc).isoformat(),
            }
            (self.out_dir / f"{name}.timing.json").write_text(json.dumps(timing, indent=2) + "\n")
        logger.info("Wrote %s", path)
        return path

    def write_json(self, name: str, artifact: str, result: Dict[str, Any], started: float) -> Path:
        return self.write(name, json.dumps(self.envelope(artifact, result), indent=2, default=str) + "\n", started)

    def graph(self, kind: Optional[GraphKind] = None):
        kind = kind or GraphKind(self.config.graph_kind)
        family = self.family
        return build_action_graph(family.elements, kind, r=self.config.tuple_r, labels=family.label_strings(),
                                  cayley_cap=self.config.cayley_cap, vertex_budget=self.config.vertex_budget,
                                  seed=self.config.seed)

    def kazhdan_generators(self):
        try:
            return [parse_permutation(text, self.config.kazhdan_degree) for text in self.config.kazhdan_gens]
        except ValueError as exc:
            raise ConfigError(f"Key 'kazhdan_gens': {exc}") from exc

    # ------------------------------------------------------------------
    # Subcommands
    # ------------------------------------------------------------------

    def construct(self) -> Dict[str, Any]:
        started = time.perf_counter()
        family = self.family
        self.write("family.json", family.to_json() + "\n", started)
        logger.info("Built %s: %d elements on %d points", family.kind.value, len(family), family.degree)
        return {"kind": family.kind.value, "size": len(family), "degree": family.degree}

    def certify(self) -> Dict[str, Any]:
        """
        Raises:
            CertificationError: unless the BSGS order equals the target order
        """
        started = time.perf_counter()
        family = self.family
        result, bsgs = FamilyValidator(seed=self.config.seed).validate_all(family)
        n = family.degree
        formula = f"{n}!" if family.kind == FamilyKind.SYM_F_n else f"{n}!/2"
        doc = {
            "valid": result.valid,
            "message": result.message,
            "degree": n,
            "order": str(bsgs.order) if bsgs is not None else None,
            "order_formula": formula if result.valid else None,
            "base_length": len(bsgs.base) if bsgs is not None else None,
        }
        self.write_json("certificate.json", "certificate", doc, started)
        if not result.valid:
            raise CertificationError(result.message.splitlines()[-1])
        logger.info("Certified: order %s = %s", formula, doc["order"])
        return doc

    def spectrum(self) -> Dict[str, Any]:
        """
        Raises:
            SolverError: if the eigensolver stopped before the tolerance was met
        """
        started = time.perf_counter()
        graph = self.graph()
        report = second_eigenvalue(graph, method=self.config.solver_method, tol=self.config.solver_tol,
                                   seed=self.config.seed, max_iterations=self.config.max_iterations,
                                   threads=self.config.threads)
        probe = delta_power_probe(graph, power=self.config.delta_power, probes=self.config.probe_count,
                                  seed=self.config.seed, lambda_star=report.lambda_star,
                                  tol=max(self.config.solver_tol, 1e-9), threads=self.config.threads)
        doc = {"graph": graph.kind.value, "spectrum": report.to_dict(), "delta_power": probe.to_dict()}
        self.write_json("spectrum.json", "spectrum", doc, started)
        if not report.converged:
            raise SolverError(f"{report.method} did not reach tolerance {report.tolerance}")
        logger.info("lambda_2 = %.6f, gap = %.6f (%s)", report.lambda_2, report.gap, report.method)
        return doc

    def expansion(self) -> Dict[str, Any]:
        """
        Raises:
            SolverError: if the eigensolver stopped before the tolerance was met
        """
        started = time.perf_counter()
        graph = self.graph()
        report = second_eigenvalue(graph, method=self.config.solver_method, tol=self.config.solver_tol,
                                   seed=self.config.seed, max_iterations=self.config.max_iterations,
                                   threads=self.config.threads)
        doc = {"cheeger": cheeger_interval(report).to_dict(), "lambda_2": report.lambda_2}
        if graph.n_vertices <= BRUTE_FORCE_MAX_VERTICES:
            doc["exact"] = brute_force_expansion(graph).to_dict()
        doc["converged"] = report.converged
        self.write_json("expansion.json", "expansion", doc, started)
        if not report.converged:
            raise SolverError(f"{report.method} did not reach tolerance {report.tolerance}")
        return doc

    def kazhdan(self) -> Dict[str, Any]:
        started = time.perf_counter()
        bounds = kazhdan_numeric(self.kazhdan_generators(), restarts=self.config.kazhdan_restarts,
                                 seed=self.config.seed)
        bounds.c = self.config.chars_c
        bounds.q = self.config.chars_q
        doc = bounds.to_dict()
        doc["expansion_lower_bound"] = kazhdan_to_expansion(min(bounds.kazhdan, 2.0)) if bounds.kazhdan > 0 else 0.0
        self.write_json("kazhdan.json", "kazhdan", doc, started)
        logger.info("Kazhdan estimate %.6f over |G| = %d", bounds.kazhdan, bounds.group_order)
        return doc

    def chars(self) -> Dict[str, Any]:
        started = time.perf_counter()
        table = character_table(self.config.chars_n)
        self.write("character_table.csv", table.to_csv(), started)
        scan = roichman_bound_scan(self.config.chars_n, self.config.chars_c, self.config.chars_q,
                                   self.config.chars_lambda1_cap, self.config.chars_support_floor)
        doc = scan.to_dict()
        self.write_json("bound_scan.json", "bound-scan", doc, started)
        return doc

    def walk(self) -> Dict[str, Any]:
        started = time.perf_counter()
        family = self.family
        length = self.config.walk_length if self.config.walk_length is not None else default_word_length(family.degree)
        report = point_mixing_exact(family, self.config.mixing_steps, budget=self.config.vertex_budget,
                                    method=self.config.solver_method, tol=self.config.solver_tol,
                                    seed=self.config.seed, threads=self.config.threads)
        report.stats = cycle_statistics(family, length, self.config.walk_samples, self.config.seed)
        doc = report.to_dict()
        if self.family_path is None and family.degree == self.construction.cube.size:
            probe = transitivity_probe(self.construction.cube, self.construction.cycle, self.config.tuple_r,
                                       self.config.transitivity_t, self.config.transitivity_pairs,
                                       self.config.seed)
            doc["transitivity"] = probe.to_dict()
        self.write_json("walk.json", "walk", doc, started)
        self.write("walk.csv", report.to_csv())
        return doc

    def baseline(self) -> Dict[str, Any]:
        started = time.perf_counter()
        report = random_cayley_baseline(self.config.baseline_group, self.config.baseline_n,
                                        self.config.baseline_set_size, self.config.baseline_trials,
                                        seed=self.config.seed, threads=self.config.threads,
                                        cayley_cap=self.config.cayley_cap)
        doc = report.to_dict()
        self.write_json("baseline.json", "baseline", doc, started)
        return doc

    def report(self) -> Dict[str, Any]:
        """Aggregate of construct, certify, spectrum, expansion and walk, as JSON and CSV."""
        started = time.perf_counter()
        sections = {"construct": self.construct(), "certify": self.certify(), "spectrum": self.spectrum(),
                    "expansion": self.expansion(), "walk": self.walk()}
        self.write_json("report.json", "report", sections, started)
        spectrum = sections["spectrum"]["spectrum"]
        rows = [
            ("kind", sections["construct"]["kind"]),
            ("degree", sections["construct"]["degree"]),
            ("family_size", sections["construct"]["size"]),
            ("order", sections["certify"]["order"]),
            ("lambda_2", repr(spectrum["lambda_2"])),
            ("lambda_star", repr(spectrum["lambda_star"])),
            ("gap", repr(spectrum["gap"])),
            ("cheeger_lower", repr(sections["expansion"]["cheeger"]["lower"])),
            ("mixing_time", sections["walk"]["mixing_time"]),
        ]
        self.write("report.csv", "key,value\n" + "".join(f"{k},{v}\n" for k, v in rows))
        return sections

    def export(self, what: str, fmt: ExportFormat) -> Path:
        """
        Raises:
            ConfigError: on an unsupported (artifact, format) pairing
        """
        started = time.perf_counter()
        if what == "graph":
            graph = self.graph()
            if fmt == ExportFormat.DOT:
                return self.write("graph.dot", graph_to_dot(graph), started)
            if fmt == ExportFormat.MM:
                return self.write("graph.mtx", graph_to_matrix_market(graph), started)
        elif what == "kazhdan-graph":
            graph = build_action_graph(self.kazhdan_generators(), GraphKind.CAYLEY, cayley_cap=self.config.cayley_cap)
            if fmt == ExportFormat.DOT:
                return self.write("kazhdan_graph.dot", graph_to_dot(graph, "cayley"), started)
            if fmt == ExportFormat.MM:
                return self.write("kazhdan_graph.mtx", graph_to_matrix_market(graph), started)
        elif what == "table":
            table = character_table(self.config.chars_n)
            if fmt == ExportFormat.CSV:
                return self.write("character_table.csv", table.to_csv(), started)
            if fmt == ExportFormat.JSON:
                doc = {"partitions": [str(p) for p in table.partitions],
                       "classes": [str(c.cycle_type) for c in table.classes], "values": table.values}
                return self.write_json("character_table.json", "character-table", doc, started)
        elif what == "family":
            if fmt == ExportFormat.JSON:
                return self.write("family.json", self.family.to_json() + "\n", started)
        raise ConfigError(f"Cannot export {what} as {fmt.value}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expander_lab", description="Bounded-degree expander experiments")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=Path, help="JSON config file (may name a 'preset')")
    parser.add_argument("--preset", help="start from a named preset")
    parser.add_argument("--out", type=Path, help="artifact directory")
    parser.add_argument("--seed", type=int, help="base seed")
    parser.add_argument("--threads", type=int, help="worker cap")
    parser.add_argument("--format", choices=[f.value for f in ExportFormat], help="export format")
    parser.add_argument("--family", type=Path, help="family file to use instead of constructing one")
    parser.add_argument("--drop", type=int, action="append", help="remove a family element by index")
    parser.add_argument("--what", default="graph", choices=["graph", "kazhdan-graph", "table", "family"],
                        help="artifact to export")
    parser.add_argument("--verbose", action="store_true")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    manager = ConfigManager()
    base = manager.get_preset(args.preset) if args.preset else None
    config = manager.load(args.config, base=base) if args.config else (base or ExperimentConfig())
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.format is not None:
        overrides["export_format"] = args.format
    if args.out is not None:
        overrides["out_dir"] = str(args.out)
    if overrides:
        overrides["K"] = config.K
        config = ExperimentConfig.from_dict(overrides, base=config)
    config.validate()
    return config


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = load_config(args)
        lab = ExpanderLab(config, Path(config.out_dir), args.family, args.drop)
        if args.subcommand == "export":
            lab.export(args.what, config.export_format)
        else:
            getattr(lab, args.subcommand)()
    except LabError as exc:
        logger.error("%s", exc)
        return int(exc.exit_code)
    except ValueError as exc:
        logger.error("Invalid input: %s", exc)
        return int(ExitCode.CONFIG_ERROR)

    print("\n" + "=" * 60)
    print(f"EXPANDER LAB OUTPUT - {args.subcommand.upper()}")
    print("=" * 60)
    for path in lab.written:
        print(f"  {path}")
    print("=" * 60 + "\n")
    return int(ExitCode.OK)


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
