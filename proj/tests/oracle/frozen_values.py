#!/usr/bin/env python3
"""Independent reference computations for values frozen into the C++ tests.

Uses sympy's prime generator (not a sieve of ours) and plain Python integers.
"""
import math
from sympy import primerange


def primes_upto(n):
    return list(primerange(2, n + 1))


def main():
    ps = primes_upto(2_100_000)
    print("pi(10^6) =", sum(1 for p in ps if p <= 10**6))

    def max_gap_upto(x):
        return max(ps[i + 1] - ps[i] for i in range(len(ps) - 1) if ps[i] <= x)

    def sum_sq_upto(x):
        return sum((ps[i + 1] - ps[i]) ** 2 for i in range(len(ps) - 1) if ps[i] <= x)

    for x in (3, 2000, 10**6):
        print(f"max_gap_up_to({x}) =", max_gap_upto(x))
    for x in (2, 5, 1000, 10**6):
        s = sum_sq_upto(x)
        print(f"sum_squared_gaps({x}) = {s}  ratio = {s / x ** (4 / 3)!r}")

    # prime gaps with p_0 = 1
    full = [1] + ps
    gaps = [full[i] - full[i - 1] for i in range(1, len(full))]

    def delta_condition(D, d):
        for delta in range(1, max(D) + 2):
            lo = sum(v for v in D if v < delta)
            hi = sum(v for v in D if v >= delta)
            if delta * d <= lo - hi:
                return delta
        return None

    found = []
    for n in range(5, 45):
        D = gaps[:n]
        d = ps[n] - ps[n - 1]
        found.append((n, delta_condition(D, d)))
    print("delta_condition(PD^n, d) n=5..44:", found)
    print("n without delta:", [n for n, v in found if v is None])

    # n >= 5 up to 10^5 where delta_condition fails
    from collections import Counter
    hist = Counter()
    total = 0
    fails = []
    for n in range(1, 100001):
        g = gaps[n - 1]
        hist[g] += 1
        total += g
        if n < 5:
            continue
        d = ps[n] - ps[n - 1]
        mx = max(hist)
        ok = None
        below = 0
        for delta in range(1, mx + 2):
            below += hist.get(delta - 1, 0) * (delta - 1)
            if delta * d <= below - (total - below):
                ok = delta
                break
        if ok is None:
            fails.append(n)
    print("n in 5..1e5 with no delta:", fails[:50], "count", len(fails), "max", max(fails) if fails else None)

    # pittel m=2 exact
    def partitions(n, maxp=None):
        if maxp is None:
            maxp = n
        if n == 0:
            yield []
            return
        for j in range(min(n, maxp), 0, -1):
            for rest in partitions(n - j, j):
                yield [j] + rest

    def eg(D):
        D = sorted(D, reverse=True)
        if sum(D) % 2:
            return False
        n = len(D)
        for k in range(1, n + 1):
            if sum(D[:k]) > k * (k - 1) + sum(min(k, v) for v in D[k:]):
                return False
        return True

    for m in (1, 2, 3, 5, 10):
        ps_ = list(partitions(2 * m))
        g = sum(1 for P in ps_ if eg(P))
        print(f"pittel exact m={m}: {g}/{len(ps_)} = {g / len(ps_)!r}")


    # p-norm conditions: last n <= 78498 where each fails
    last3 = last4 = 0
    s2 = s1 = 0
    for n in range(1, 78499):
        g = gaps[n - 1]
        s2 += (2 + g) ** 2
        s1 += g * g
        pn, nxt = full[n], full[n + 1]
        if s2 * s2 > n ** 3:
            last3 = n
        if 16 * (nxt - pn) * s1 > (pn - 1) ** 2:
            last4 = n
    print("pnorm to 78498: cond3 n0 =", last3 + 1, " cond4 n0 =", last4 + 1)

    # large-gap sums over x <= p_l <= 2x
    for x in (10**3, 10**4, 10**5):
        row = []
        for N in (2, 10, 30, 100):
            row.append(sum(ps[i + 1] - ps[i] for i in range(len(ps) - 1)
                           if x <= ps[i] <= 2 * x and ps[i + 1] - ps[i] >= N))
        print(f"sum_large_gaps x={x} N=2,10,30,100:", row)

    # tightest pair of the sqrt-interval scan on [117, 10^6]
    best = None
    for i in range(len(ps) - 1):
        if ps[i + 1] <= 117 or ps[i] >= 10**6:
            continue
        a = max(ps[i], 117)
        slack = math.sqrt(a) - (ps[i + 1] - a)
        if best is None or slack < best[0]:
            best = (slack, ps[i], ps[i + 1])
    print("legendre tightest pair on [117, 1e6]:", best)
    print("163*ln^2(2) =", repr(163 * math.log(2) ** 2), " 4*ln^2 2 =", repr(4 * math.log(2) ** 2))


if __name__ == "__main__":
    main()
