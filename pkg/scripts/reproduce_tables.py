"""Refit the published model-comparison tables on the bundled datasets.

For each available dataset this prints the fitted parameters, log-likelihood,
AIC and BIC of every model next to the published values, the normal vs BASN2
likelihood-ratio test, and the variance-covariance matrix against the
published one.  Missing datasets are reported and skipped.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from basn import audit
from basn.datasets import has_bundled, load_bundled
from basn.inference import compare_models, lr_test_normal_vs_basn2

PUBLISHED = {
    "lakes": {
        "models": ["normal", "laplace", "asn", "basn2"],
        "loglik": {"normal": -253.599, "laplace": -239.248, "asn": -235.370, "basn2": -226.228},
        "aic": {"normal": 511.198, "laplace": 482.496, "asn": 476.739, "basn2": 458.455},
        "lr": 54.742,
    },
    "bmi": {
        "models": ["normal", "basn2"],
        "loglik": {"normal": -498.668, "basn2": -484.773},
        "aic": {"normal": 1001.336, "basn2": 975.546},
        "lr": 27.79,
    },
}


def reproduce(name: str) -> dict:
    pub = PUBLISHED[name]
    d = load_bundled(name)
    rep = compare_models(d, pub["models"])
    lr = lr_test_normal_vs_basn2(d)
    rows = []
    for r in rep.rows:
        row = {"model": r.model, "published_loglik": pub["loglik"][r.model],
               "published_aic": pub["aic"][r.model]}
        if r.fit is not None:
            row.update(params=r.fit.params, loglik=r.fit.loglik, aic=r.fit.aic, bic=r.fit.bic)
        else:
            row["error"] = r.error
        rows.append(row)
    basn2 = next(r.fit for r in rep.rows if r.model == "basn2")
    printed = audit.printed_vcov(name)
    return {
        "dataset": name, "n": d.n, "rows": rows, "ranking": rep.ranking,
        "lr": {"statistic": lr.statistic, "published": pub["lr"], "reject_1pct": lr.reject_null},
        "vcov": {"fitted": basn2.vcov.tolist(), "published_alpha_mu_sigma": printed.tolist(),
                 "max_rel_diff": float(np.max(np.abs(basn2.vcov - printed) / np.abs(printed)))},
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="*", help=f"subset of {sorted(PUBLISHED)}; default: all")
    args = ap.parse_args(argv)
    unknown = set(args.names) - set(PUBLISHED)
    if unknown:
        ap.error(f"unknown dataset(s) {sorted(unknown)}")
    results = []
    for name in args.names or sorted(PUBLISHED):
        if not has_bundled(name):
            print(f"{name}: bundled data missing; run scripts/fetch_datasets.py", file=sys.stderr)
            continue
        results.append(reproduce(name))
    json.dump(results, sys.stdout, indent=2)
    print()
    return 0 if results else 2


if __name__ == "__main__":
    raise SystemExit(main())
