"""Time SVM training with the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--docs 2000] [--epochs 20] [--repeat 3]

Both backends run on the same synthetic corpus (unigram+bigram features) and
must produce bit-identical weights; the script exits non-zero otherwise.
"""

import argparse
import sys
import time

import numpy as np

from nesent import _ext
from nesent.corpus import BINARY
from nesent.supervised import NGramConfig, build_feature_space, train_svm, vectorize
from nesent.synthetic import ne_signal_corpus


def best_of(repeat, fn):
    times, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=2000)
    ap.add_argument("--epochs", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    corpus = ne_signal_corpus(n_docs=args.docs, seed=1).corpus
    train = [d for d in corpus.train if d.gold in BINARY]
    space = build_feature_space(train, NGramConfig((1, 2)))
    xs = [vectorize(d, space) for d in train]
    ys = [d.gold for d in train]
    print(f"{len(train)} training docs, {len(space)} features, {args.epochs} epochs, "
          f"{len(train) * args.epochs} updates")

    def run(kernels):
        return train_svm(xs, ys, space, epochs=args.epochs, seed=0, kernels=kernels)

    t_py, m_py = best_of(args.repeat, lambda: run(_ext.python_kernels))
    print(f"python  {t_py * 1000:9.1f} ms")
    if _ext.compiled_kernels is None:
        print("cython  not available (extension not built or NESENT_PURE_PYTHON set)")
        return 0
    t_c, m_c = best_of(args.repeat, lambda: run(_ext.compiled_kernels))
    print(f"cython  {t_c * 1000:9.1f} ms   speedup x{t_py / t_c:.1f}")
    same = np.array_equal(m_py.weights, m_c.weights) and m_py.bias == m_c.bias
    print(f"identical weights: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
