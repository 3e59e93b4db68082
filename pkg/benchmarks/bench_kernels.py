"""Compare the compiled and numpy kernels on the workloads the library runs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Each workload is run on every available backend; results are checked for
equality before timings are reported.
"""
from __future__ import annotations

import argparse
import json
import platform
import time

import numpy as np

from coxfold import kernels
from coxfold.coxeter import generate_group, generate_root_system, ztau_matrix_array
from coxfold.double_ext import candidate_matrices
from coxfold.quasicrystal import TranslationSpec, _encode


def _h4_shell_inputs():
    group = generate_group("H4")
    spec = TranslationSpec.parse("H4", "twofold", "tau")
    a0 = spec.affine_root
    pts = [(r + a0).coords for r in generate_root_system("H4")]
    return group.rotations(), _encode(pts, 1)


def _workloads():
    e8 = candidate_matrices("E8")
    d6 = candidate_matrices("D6")
    mats, vecs = _h4_shell_inputs()
    right = ztau_matrix_array(generate_group("H3").element(7))
    left = generate_group("H3").matrices
    return {
        "det_batch D6 double candidates (8192 x 8x8)": (kernels.det_batch, (d6,)),
        "det_batch E8 double candidates (131072 x 10x10)": (kernels.det_batch, (e8,)),
        "ztau_apply H4 rotations x P(1) seeds (7200 x 120)": (kernels.ztau_apply, (mats, vecs)),
        "ztau_matmul_right H3 group x element (120)": (kernels.ztau_matmul_right, (left, right)),
    }


def _time(fn, args, impl, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args, impl=impl)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    impls = kernels.backends()
    rows = []
    for name, (fn, fargs) in _workloads().items():
        timings, results = {}, {}
        for key, impl in impls.items():
            timings[key], results[key] = _time(fn, fargs, impl, args.repeat)
        ref = results["python"]
        agree = all(np.array_equal(ref, r) for r in results.values())
        speedup = timings["python"] / timings["cython"] if "cython" in timings else None
        rows.append({"workload": name, "seconds": timings, "speedup": speedup, "results_agree": agree})
    if args.json:
        print(json.dumps({"python": platform.python_version(), "default": kernels.BACKEND, "rows": rows}, indent=1))
        return 0
    print(f"default backend: {kernels.BACKEND}; best of {args.repeat}")
    for r in rows:
        t = "  ".join(f"{k} {v * 1e3:9.2f} ms" for k, v in r["seconds"].items())
        sp = f"  x{r['speedup']:.1f}" if r["speedup"] else ""
        print(f"{r['workload']:55} {t}{sp}  agree={r['results_agree']}")
    return 0 if all(r["results_agree"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
