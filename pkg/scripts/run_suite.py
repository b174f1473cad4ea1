#!/usr/bin/env python3
"""
Verification Suite Runner

Runs every applicable command over one or more model files, and optionally
the randomized fixture suites, then saves a JSON report.
"""

import sys
import os
import argparse
from typing import Any, Dict, List, Tuple

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from courantkit import catalog
from courantkit.config import configure_logging, load_settings
from courantkit.errors import CourantKitError
from courantkit.model import ModelDocument, load_model
from courantkit.runner import RunFlags, run_command
from courantkit.suites import form_oracle_equivalence, mutation_suite, oracle_equivalence
from courantkit.utils import save_report
from suite_config import get_config, list_configs


def plan_commands(doc: ModelDocument, config: Dict[str, Any], workers: int = 1) -> List[Tuple[str, RunFlags]]:
    """Every command the declarations in ``doc`` give enough input for."""
    common = dict(triples=config["triples"], samples=config["samples"],
                  max_degree=config["max_degree"], workers=workers)
    plan = [("validate", RunFlags(**common))]
    for name, decl in doc.doubles.items():
        plan.append(("courant-check", RunFlags(double=name, identities=config["identities"], **common)))
        plan.append(("bialgebroid-check", RunFlags(double=name, **common)))
        plan.append(("anomaly", RunFlags(double=name, **common)))
        for tensor in doc.tensors.values():
            if tensor.degree == 2 and tensor.host in decl.pair:
                plan.append(("mc-residual", RunFlags(double=name, graph_of=tensor.name, **common)))
    for name, sub in doc.subbundles.items():
        plan.append(("dirac-check", RunFlags(double=sub.double, h=[name], **common)))
    if doc.morphisms:
        plan.append(("morphism-check", RunFlags(**common)))
    return plan


def run_model_suite(path: str, config: Dict[str, Any], workers: int = 1) -> Dict[str, Any]:
    """Run the planned commands on one model file.

    Returns:
        Dictionary with one entry per command run and pass/fail/error counts
    """
    try:
        doc = load_model(path)
    except (CourantKitError, OSError) as e:
        print(f"❌ {path}: {e}")
        return {"model": path, "error": str(e), "runs": [], "passed": 0, "failed": 0, "errors": 1}

    runs = []
    for command, flags in plan_commands(doc, config, workers):
        echo = f"{command} {path}" + (f" --double {flags.double}" if flags.double else "")
        if flags.graph_of:
            echo += f" --graph-of {flags.graph_of}"
        if flags.h:
            echo += " --h " + " ".join(flags.h)
        report = run_command(doc, command, flags, echo)
        icon = {0: "✅", 1: "❌", 2: "⚠️"}[report.exit_code]
        print(f"{icon} {echo}")
        runs.append(report.to_dict())

    return {
        "model": path,
        "runs": runs,
        "passed": sum(1 for r in runs if r["exit_code"] == 0),
        "failed": sum(1 for r in runs if r["exit_code"] == 1),
        "errors": sum(1 for r in runs if r["exit_code"] == 2),
    }


def run_fixture_suite(config: Dict[str, Any], workers: int = 1) -> Dict[str, Any]:
    """Flip duality on the catalog doubles, oracle agreement and the mutation harness."""
    print("🧪 Fixture suites")
    duality = []
    for name, D in catalog.bialgebroid_fixtures():
        direct = D.check_bialgebroid(workers=workers).passed
        flipped = D.flip().check_bialgebroid(workers=workers).passed
        duality.append({"fixture": name, "bialgebroid": direct, "flip_agrees": direct == flipped})
        print(f"   {'✅' if direct == flipped else '❌'} {name}: bialgebroid={direct}")

    oracle = []
    instances = config["oracle_instances"]
    for D in (catalog.standard_double(2), catalog.standard_double(3), catalog.linear_poisson_double()):
        for kind in ("H", "I"):
            summary = oracle_equivalence(D, kind, instances, max_degree=1, workers=workers)
            oracle.append(summary.get_summary())
            print(f"   📊 {D.name}/{kind}: {summary.agreements}/{summary.instances} agree, "
                  f"{summary.dirac} Dirac")
    summary = form_oracle_equivalence(catalog.symplectic_r2(), instances, max_degree=1, workers=workers)
    oracle.append(summary.get_summary())
    print(f"   📊 {summary.subject}/omega: {summary.agreements}/{summary.instances} agree")

    mutants = mutation_suite(catalog.linear_poisson_double(), workers=workers, limit=config["mutation_limit"])
    detected = sum(1 for m in mutants if m.detected)
    print(f"   🧬 mutants detected: {detected}/{len(mutants)}")

    return {
        "duality": duality,
        "oracle": oracle,
        "mutants": [{"label": m.label, "failing": m.failing} for m in mutants],
        "mutants_detected": detected,
    }


def main():
    """Main function for the suite runner."""
    parser = argparse.ArgumentParser(description="Run every applicable check over model files")
    parser.add_argument("models", nargs="*", help="Model files")
    parser.add_argument("--config", type=str, default="standard", help="Suite configuration")
    parser.add_argument("--list-configs", action="store_true", help="List available configurations")
    parser.add_argument("--fixtures", action="store_true", help="Also run the randomized fixture suites")
    parser.add_argument("--workers", type=int, default=None, help="Thread-pool width")
    parser.add_argument("--output-dir", type=str, default="reports", help="Output directory")

    args = parser.parse_args()

    if args.list_configs:
        list_configs()
        return 0

    settings = load_settings(workers=args.workers)
    configure_logging(settings)
    config = get_config(args.config)

    print(f"🚀 Suite '{args.config}' on {len(args.models)} model file(s)")
    print("=" * 50)
    results = {"command": f"suite_{args.config}", "config": config,
               "models": [run_model_suite(path, config, settings.workers) for path in args.models]}
    if args.fixtures:
        results["fixtures"] = run_fixture_suite(config, settings.workers)

    filepath = save_report(results, results_dir=args.output_dir)
    print(f"💾 Report saved to: {filepath}")

    failed = sum(m["failed"] + m["errors"] for m in results["models"])
    print(f"🏁 {'All checks passed' if failed == 0 else f'{failed} command(s) failed'}")
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
