#!/usr/bin/env python3
"""
Batch Suite Runner

Run the verification suite over several model files and configurations in
parallel and tabulate the results.
"""

import sys
import os
import json
import concurrent.futures
import threading
from datetime import datetime
from pathlib import Path

import pandas as pd

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from courantkit.config import configure_logging, load_settings
from run_suite import run_model_suite
from suite_config import get_config, list_configs


class BatchSuiteRunner:
    """Run model files x configurations and compare results."""

    def __init__(self, output_dir="batch_reports", max_workers=None):
        """Initialize batch runner.

        Args:
            output_dir: Directory to save all outputs
            max_workers: Maximum number of parallel workers (None = auto)
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(exist_ok=True)
        self.max_workers = max_workers

        # Results storage (thread-safe)
        self.results = []
        self.results_lock = threading.Lock()

    def run_single(self, model, config_name, run_id):
        """Run the suite on one model file with one configuration.

        Returns:
            Dictionary with counts and timing
        """
        with self.results_lock:
            print(f"\n🧪 Starting {run_id}")
            print(f"   Model: {model}")
            print(f"   Config: {config_name}")

        config = get_config(config_name)
        started = datetime.now()
        outcome = run_model_suite(model, config)
        elapsed = (datetime.now() - started).total_seconds()

        result = {
            "run_id": run_id,
            "model": model,
            "config_name": config_name,
            "commands": len(outcome["runs"]),
            "passed": outcome["passed"],
            "failed": outcome["failed"],
            "errors": outcome["errors"],
            "success": outcome["failed"] == 0 and outcome["errors"] == 0,
            "seconds": round(elapsed, 2),
            "timestamp": started.isoformat(),
        }
        with open(self.output_dir / f"{run_id}.json", "w") as f:
            json.dump(outcome, f, indent=2)

        with self.results_lock:
            print(f"{'✅' if result['success'] else '❌'} {run_id}: "
                  f"{result['passed']}/{result['commands']} commands passed in {elapsed:.1f}s")
        return result

    def run_batch(self, models, configs):
        """Run every (model, config) pair in parallel."""
        print("🚀 Starting batch suite (parallel execution)")
        print("=" * 60)

        jobs = []
        for model in models:
            for config_name in configs:
                run_id = f"run_{len(jobs) + 1:03d}_{Path(model).stem}_{config_name}"
                jobs.append((model, config_name, run_id))

        print(f"📊 Total runs: {len(jobs)}")
        print(f"🔧 Max workers: {self.max_workers or 'auto'}")
        print("=" * 60)

        results = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_job = {executor.submit(self.run_single, *job): job for job in jobs}
            for future in concurrent.futures.as_completed(future_to_job):
                model, config_name, run_id = future_to_job[future]
                try:
                    results.append(future.result())
                except Exception as exc:
                    with self.results_lock:
                        print(f"❌ {run_id} generated an exception: {exc}")
                    results.append({
                        "run_id": run_id,
                        "model": model,
                        "config_name": config_name,
                        "error": str(exc),
                        "success": False,
                        "timestamp": datetime.now().isoformat(),
                    })

        self.results = sorted(results, key=lambda r: r["run_id"])
        self._save_batch_results()
        self._print_batch_summary()

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.results)

    def _save_batch_results(self):
        results_file = self.output_dir / "batch_results.json"
        with open(results_file, "w") as f:
            json.dump(self.results, f, indent=2)
        csv_file = self.output_dir / "batch_summary.csv"
        self.summary_frame().to_csv(csv_file, index=False)
        print(f"💾 Batch results saved to: {results_file} and {csv_file}")

    def _print_batch_summary(self):
        print("\n" + "=" * 60)
        print("📊 BATCH SUITE SUMMARY")
        print("=" * 60)
        frame = self.summary_frame()
        if frame.empty:
            print("No runs.")
            return
        columns = [c for c in ("run_id", "passed", "failed", "errors", "seconds") if c in frame]
        print(frame[columns].to_string(index=False))
        if "config_name" in frame and "seconds" in frame:
            print("\n⏱️ Mean seconds per configuration:")
            print(frame.groupby("config_name")["seconds"].mean().round(2).to_string())
        print(f"\n📁 All outputs saved to: {self.output_dir}")


def main():
    """Main function for batch suites."""
    import argparse

    parser = argparse.ArgumentParser(description="Run suites over model files in parallel")
    parser.add_argument("models", nargs="*", help="Model files")
    parser.add_argument("--configs", nargs="+", type=str, default=["standard"],
                        help="Configurations to run")
    parser.add_argument("--list-configs", action="store_true",
                        help="List available configurations")
    parser.add_argument("--output-dir", type=str, default="batch_reports",
                        help="Output directory")
    parser.add_argument("--max-workers", type=int, default=None,
                        help="Maximum number of parallel workers (default: auto)")

    args = parser.parse_args()

    if args.list_configs:
        list_configs()
        return

    configure_logging(load_settings())
    print("🧪 Parallel Batch Verification")
    print("=" * 50)
    print(f"Models: {args.models}")
    print(f"Configurations: {args.configs}")
    print(f"Output directory: {args.output_dir}")

    BatchSuiteRunner(output_dir=args.output_dir, max_workers=args.max_workers).run_batch(
        args.models, args.configs
    )


if __name__ == "__main__":
    main()
