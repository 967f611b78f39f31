#!/usr/bin/env python3
"""Independent Newton-Raphson power-flow reference.

Parses MATPOWER .m case files, solves the AC power flow from a flat start
(no reactive-limit enforcement), and writes a JSON reference solution used
to pin expected values in the C++ test suite. Entirely separate from the
C++ implementation: dense numpy linear algebra, its own parser.

Usage: refpf.py CASE.m OUT.json [--check-embedded]
"""
import json
import re
import sys

import numpy as np


def parse_matrix(text, name):
    m = re.search(r"mpc\.%s\s*=\s*\[(.*?)\];" % name, text, re.S)
    if not m:
        raise ValueError("matrix %s not found" % name)
    rows = []
    for line in m.group(1).splitlines():
        line = line.split('%')[0].strip().rstrip(';')
        if not line:
            continue
        rows.append([float(tok) for tok in line.split()])
    return np.array(rows)


def parse_case(path):
    text = open(path).read()
    m = re.search(r"mpc\.baseMVA\s*=\s*([0-9.eE+-]+)\s*;", text)
    return {
        "baseMVA": float(m.group(1)),
        "bus": parse_matrix(text, "bus"),
        "gen": parse_matrix(text, "gen"),
        "branch": parse_matrix(text, "branch"),
    }


def build_ybus(case):
    bus, branch = case["bus"], case["branch"]
    n = bus.shape[0]
    idx = {int(b): i for i, b in enumerate(bus[:, 0])}
    Y = np.zeros((n, n), dtype=complex)
    for row in branch:
        if row[10] == 0:
            continue
        f, t = idx[int(row[0])], idx[int(row[1])]
        ys = 1.0 / complex(row[2], row[3])
        bc = row[4]
        tau = row[8] if row[8] != 0 else 1.0
        shift = np.deg2rad(row[9])
        tap = tau * np.exp(1j * shift)
        ytt = ys + 0.5j * bc
        Y[f, f] += ytt / (tap * np.conj(tap))
        Y[t, t] += ytt
        Y[f, t] += -ys / np.conj(tap)
        Y[t, f] += -ys / tap
    for i in range(n):
        Y[i, i] += complex(bus[i, 4], bus[i, 5]) / case["baseMVA"]
    return Y, idx


def solve_nr(case, tol=1e-12, max_iter=50):
    bus, gen = case["bus"], case["gen"]
    base = case["baseMVA"]
    n = bus.shape[0]
    Y, idx = build_ybus(case)

    kind = bus[:, 1].astype(int)  # 1 PQ, 2 PV, 3 slack
    slack = np.where(kind == 3)[0]
    assert len(slack) == 1
    pv = np.where(kind == 2)[0]
    pq = np.where(kind == 1)[0]

    Pspec = -bus[:, 2] / base
    Qspec = -bus[:, 3] / base
    vset = {}
    for row in gen:
        if row[7] == 0:
            continue
        i = idx[int(row[0])]
        Pspec[i] += row[1] / base
        vset[i] = row[5]

    Vm = np.ones(n)
    Va = np.zeros(n)
    Va[:] = np.deg2rad(bus[slack[0], 8])
    Vm[slack[0]] = vset.get(slack[0], bus[slack[0], 7])
    for i in pv:
        Vm[i] = vset[i]

    pvpq = np.concatenate([pv, pq])

    def injections(Vm, Va):
        V = Vm * np.exp(1j * Va)
        S = V * np.conj(Y @ V)
        return S.real, S.imag

    iters = 0
    for iters in range(1, max_iter + 1):
        P, Q = injections(Vm, Va)
        dP = Pspec[pvpq] - P[pvpq]
        dQ = Qspec[pq] - Q[pq]
        mis = np.concatenate([dP, dQ])
        if np.max(np.abs(mis)) < tol:
            break
        V = Vm * np.exp(1j * Va)
        Ibus = Y @ V
        diagV = np.diag(V)
        diagI = np.diag(Ibus)
        diagVnorm = np.diag(V / Vm)
        dS_dVa = 1j * diagV @ np.conj(diagI - Y @ diagV)
        dS_dVm = diagV @ np.conj(Y @ diagVnorm) + np.conj(diagI) @ diagVnorm
        J11 = dS_dVa[np.ix_(pvpq, pvpq)].real
        J12 = dS_dVm[np.ix_(pvpq, pq)].real
        J21 = dS_dVa[np.ix_(pq, pvpq)].imag
        J22 = dS_dVm[np.ix_(pq, pq)].imag
        J = np.block([[J11, J12], [J21, J22]])
        dx = np.linalg.solve(J, mis)
        Va[pvpq] += dx[:len(pvpq)]
        Vm[pq] += dx[len(pvpq):]
    P, Q = injections(Vm, Va)
    mis = np.concatenate([Pspec[pvpq] - P[pvpq], Qspec[pq] - Q[pq]])
    return Vm, Va, iters, float(np.max(np.abs(mis)))


def main():
    case_path, out_path = sys.argv[1], sys.argv[2]
    case = parse_case(case_path)
    Vm, Va, iters, mis = solve_nr(case)
    print(f"{case_path}: {iters} iterations, max mismatch {mis:.3e}")

    if "--check-embedded" in sys.argv:
        ref_vm = case["bus"][:, 7]
        ref_va = case["bus"][:, 8]
        dvm = np.max(np.abs(Vm - ref_vm))
        dva = np.max(np.abs(np.rad2deg(Va) - ref_va))
        print(f"  vs embedded solution columns: |dVm|max={dvm:.4g} |dVa|max={dva:.4g} deg")

    out = {
        "case": case_path.split("/")[-1],
        "tol": 1e-12,
        "iterations": iters,
        "max_mismatch": mis,
        "bus_id": [int(b) for b in case["bus"][:, 0]],
        "vm": [round(v, 12) for v in Vm],
        "va_rad": [round(v, 12) for v in Va],
    }
    with open(out_path, "w") as f:
        json.dump(out, f, indent=1)
    print(f"  wrote {out_path}")


if __name__ == "__main__":
    main()
