#!/usr/bin/env python3
"""
Test runner for the psybracket toolkit.

Runs the pytest suites by marker plus the lint, type and security checks,
then prints a summary table.
"""

import argparse
import subprocess
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List


class TestRunner:
    """Runs check categories and collects their results."""

    def __init__(self) -> None:
        self.project_root = Path(__file__).parent
        self.src_dir = self.project_root / "src"
        self.tests_dir = self.project_root / "tests"
        self.results: Dict[str, Dict[str, Any]] = {}

    def run_command(self, cmd: List[str], description: str) -> Dict[str, Any]:
        """Run a command and capture results."""
        print(f"\n{'=' * 60}")
        print(f"Running: {description}")
        print(f"Command: {' '.join(cmd)}")
        print(f"{'=' * 60}")

        start_time = time.time()
        try:
            result = subprocess.run(
                cmd, capture_output=True, text=True, cwd=self.project_root
            )
        except OSError as e:
            print(f"Error running command: {e}")
            return {
                "success": False,
                "stderr": str(e),
                "duration": time.time() - start_time,
                "description": description,
            }
        print(f"Exit code: {result.returncode}")
        if result.stdout:
            print(result.stdout)
        if result.stderr:
            print(result.stderr)
        return {
            "success": result.returncode == 0,
            "returncode": result.returncode,
            "stderr": result.stderr,
            "duration": time.time() - start_time,
            "description": description,
        }

    def _pytest(self, marker: str, description: str, coverage: bool = True) -> Dict[str, Any]:
        cmd = [sys.executable, "-m", "pytest", str(self.tests_dir), "-m", marker]
        if not coverage:
            # coverage floor applies to full runs only
            cmd.append("--no-cov")
        return self.run_command(cmd, description)

    def run_unit_tests(self) -> Dict[str, Any]:
        return self._pytest("not integration and not slow", "Unit Tests")

    def run_integration_tests(self) -> Dict[str, Any]:
        return self._pytest("integration", "Integration Tests", coverage=False)

    def run_property_tests(self) -> Dict[str, Any]:
        return self._pytest("property", "Property Tests (hypothesis)", coverage=False)

    def run_coverage(self) -> Dict[str, Any]:
        cmd = [sys.executable, "-m", "pytest", str(self.tests_dir)]
        return self.run_command(cmd, "Full Suite with Coverage")

    def run_linting(self) -> Dict[str, Any]:
        cmd = [sys.executable, "-m", "flake8", str(self.src_dir), str(self.tests_dir)]
        return self.run_command(cmd, "Linting (flake8)")

    def run_type_checking(self) -> Dict[str, Any]:
        return self.run_command(
            [sys.executable, "-m", "mypy", str(self.src_dir)], "Type Checking (mypy)"
        )

    def run_formatting_check(self) -> Dict[str, Any]:
        paths = [str(self.src_dir), str(self.tests_dir)]
        black = self.run_command(
            [sys.executable, "-m", "black", "--check", *paths], "Formatting (black)"
        )
        isort = self.run_command(
            [sys.executable, "-m", "isort", "--check-only", *paths], "Imports (isort)"
        )
        return {
            "success": black["success"] and isort["success"],
            "duration": black["duration"] + isort["duration"],
            "description": "Code Formatting Checks",
        }

    def run_security_checks(self) -> Dict[str, Any]:
        return self.run_command(
            [sys.executable, "-m", "bandit", "-q", "-r", str(self.src_dir)],
            "Security Check (bandit)",
        )

    def categories(self) -> Dict[str, Callable[[], Dict[str, Any]]]:
        return {
            "unit": self.run_unit_tests,
            "integration": self.run_integration_tests,
            "property": self.run_property_tests,
            "coverage": self.run_coverage,
            "lint": self.run_linting,
            "type": self.run_type_checking,
            "format": self.run_formatting_check,
            "security": self.run_security_checks,
        }

    def generate_report(self) -> None:
        print(f"\n{'=' * 80}")
        print("TEST REPORT")
        print(f"{'=' * 80}")
        passed = sum(1 for r in self.results.values() if r.get("success"))
        print(f"Passed: {passed}/{len(self.results)}")
        for category, result in self.results.items():
            status = "PASS" if result.get("success") else "FAIL"
            print(f"{status} {category:<30} ({result.get('duration', 0):.2f}s)")
            if not result.get("success") and result.get("stderr"):
                print(f"    Error: {result['stderr'][:100]}...")

    def run(self, names: List[str]) -> bool:
        table = self.categories()
        for name in names:
            self.results[name] = table[name]()
        self.generate_report()
        return all(r.get("success", False) for r in self.results.values())


def main() -> None:
    """Main entry point."""
    runner = TestRunner()
    parser = argparse.ArgumentParser(description="Psybracket test runner")
    parser.add_argument(
        "--category",
        choices=[*runner.categories(), "all"],
        default="all",
        help="Check category to run",
    )
    args = parser.parse_args()
    names = list(runner.categories()) if args.category == "all" else [args.category]
    sys.exit(0 if runner.run(names) else 1)


if __name__ == "__main__":
    main()
