# Copyright 2026 The DRGL Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Computes the reference values frozen into the C++ unit tests.

Uses scipy's HiGHS solver on the unreduced least-favorable-distribution
program and plain numpy arithmetic for the classifier examples. Run with
`python3 tests/oracle/freeze_values.py`; the printed numbers are pasted
into the tests.
"""

import numpy as np
from scipy.optimize import linprog


def lfd_margin(costs, phat, radii):
    s = costs.shape[0]
    m_count = phat.shape[0]
    n_p, n_t = m_count * s, s
    n = n_p + n_t + m_count * s * s

    def p(m, i):
        return m * s + i

    def t(i):
        return n_p + i

    def g(m, i, j):
        return n_p + n_t + m * s * s + i * s + j

    c = np.zeros(n)
    c[n_p:n_p + n_t] = 1.0
    a_eq, b_eq, a_ub, b_ub = [], [], [], []
    for m in range(m_count):
        for j in range(s):
            row = np.zeros(n)
            for i in range(s):
                row[g(m, i, j)] = 1.0
            a_eq.append(row)
            b_eq.append(phat[m, j])
        for i in range(s):
            row = np.zeros(n)
            for j in range(s):
                row[g(m, i, j)] = 1.0
            row[p(m, i)] = -1.0
            a_eq.append(row)
            b_eq.append(0.0)
        for i in range(s):
            row = np.zeros(n)
            row[p(m, i)] = 1.0
            row[t(i)] = -1.0
            a_ub.append(row)
            b_ub.append(0.0)
        row = np.zeros(n)
        for i in range(s):
            for j in range(s):
                row[g(m, i, j)] = costs[i, j]
        a_ub.append(row)
        b_ub.append(radii[m])
    res = linprog(c, A_ub=np.array(a_ub), b_ub=b_ub, A_eq=np.array(a_eq), b_eq=b_eq,
                  bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10,
                           "dual_feasibility_tolerance": 1e-10})
    assert res.status == 0
    return res.fun


def dirac(labels, m_count):
    labels = np.asarray(labels)
    w = np.zeros((m_count, len(labels)))
    for m in range(m_count):
        idx = labels == m
        w[m, idx] = 1.0 / idx.sum()
    return w


def euclid(points):
    d = points[:, None, :] - points[None, :, :]
    return np.sqrt((d ** 2).sum(-1))


def main():
    line = np.array([[0.0], [1.0], [3.0], [6.0]])
    a = lfd_margin(euclid(line), dirac([0, 0, 1, 1], 2), [0.5, 0.5])
    print(f"lfd line euclidean radius 0.5: {a:.15f}")
    c = lfd_margin(euclid(line) ** 2, dirac([0, 0, 1, 1], 2), [1.0, 1.0])
    print(f"lfd line squared radius 1.0: {c:.15f}")
    plane = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0, 2.0], [3.0, 1.0]])
    b = lfd_margin(euclid(plane), dirac([0, 1, 2, 0, 1], 3), [0.3, 0.6, 0.9])
    print(f"lfd plane three classes: {b:.15f}")

    # Weighted 3-NN over three 1-D training points, query at 0.5.
    train = np.array([0.0, 1.0, 3.0])
    labels = np.array([0, 1, 1])
    w = 1.0 / (np.abs(train - 0.5) + 1e-8)
    scores = np.array([w[labels == 0].sum(), w[labels == 1].sum()])
    print("knn probabilities:", [f"{v:.17g}" for v in scores / scores.sum()])

    # KDE over two support points at 0 and 2 with LFD weights.
    lfd = np.array([[0.75, 0.25], [0.25, 0.75]])
    support = np.array([0.0, 2.0])
    h = 0.8
    q = 0.5
    k = np.exp(-((q - support) ** 2) / (2 * h * h))
    f = lfd @ k
    print("kde probabilities:", [f"{v:.17g}" for v in f / f.sum()])

    print(f"path graph entry: {1 / np.sqrt(6):.17g}")


if __name__ == "__main__":
    main()
