"""Run the full audit under every reading and write one JSON report per reading."""
import argparse
import json
import time
from dataclasses import asdict
from pathlib import Path

from psystem.replay import AuditConfig, Reading, full_audit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/audit"))
    ap.add_argument("--grant-eq4", action="store_true")
    ap.add_argument("--digit-budget", type=int, default=AuditConfig.digit_budget)
    args = ap.parse_args()

    cfg = AuditConfig(digit_budget=args.digit_budget, grant_eq4=args.grant_eq4)
    args.out.mkdir(parents=True, exist_ok=True)
    for r in Reading:
        t0 = time.perf_counter()
        report = full_audit(r, cfg)
        elapsed = time.perf_counter() - t0
        doc = {"config": asdict(cfg), **report.as_dict()}
        (args.out / f"{r.value}.json").write_text(json.dumps(doc, indent=2) + "\n")
        verdicts = ", ".join(f"{s.step}={s.status}/{s.reason}" for s in report.steps)
        print(f"{r.value:22s} {elapsed * 1000:7.1f} ms  {verdicts}")


if __name__ == "__main__":
    main()
