#!/usr/bin/env python3
"""Emit the modified PPF study cases and their uncertainty configs.

39-bus study: loads at 15 buses scaled by 1.10; 4x180 MW wind farms at
buses 32-35 and 4x120 MW solar plants at buses 36-39, each displacing an
equal expected amount of the host unit's schedule. 21 Gaussian load
channels (sigma = 5% of mean), Weibull wind speeds, Beta solar radiation.

118-bus study: loads at 9 buses scaled by 1.60; 6x100 MW wind at buses
10/25/26/49/65/66 and 6x60 MW solar at 12/59/61/80/89/100, same
displacement rule; 99 Gaussian load channels. 111 channels total.
"""
import json
import re
import sys

sys.path.insert(0, 'scripts')
from refpf import parse_case

E_WIND = 0.370792   # E[P_w]/Pr for Weibull(k=2.15, c=9.0), curve 4/15/25 m/s
E_SOLAR = 0.495943  # E[P_pv]/Pr for Beta(0.9, 0.9) on [0,1000], rc=150, rstd=1000

WEIBULL = {"type": "weibull", "shape": 2.15, "scale": 9.0}
BETA = {"type": "beta", "alpha": 0.9, "beta": 0.9, "lo": 0.0, "hi": 1000.0}


def fmt(x):
    return ("%.10g" % x)


def emit_case(case, name, path):
    out = ["function mpc = %s" % name,
           "%% %s  modified PPF study case (see cases/README.md)." % name.upper(),
           "mpc.version = '2';",
           "mpc.baseMVA = %s;" % fmt(case['baseMVA']), ""]
    cols = {'bus': 13, 'gen': 10, 'branch': 11}
    for mat in ('bus', 'gen', 'branch'):
        out.append("mpc.%s = [" % mat)
        for row in case[mat]:
            out.append("\t" + "\t".join(fmt(v) for v in row[:cols[mat]]) + ";")
        out.append("];")
        out.append("")
    open(path, "w").write("\n".join(out))
    print("wrote", path)


def build_study(case_path, scaled, scale, wind, wind_pr, solar, solar_pr, out_case, out_cfg):
    case = parse_case(case_path)
    bid = {int(b): i for i, b in enumerate(case['bus'][:, 0])}
    for b in scaled:
        case['bus'][bid[b], 2] = round(case['bus'][bid[b], 2] * scale, 6)
        case['bus'][bid[b], 3] = round(case['bus'][bid[b], 3] * scale, 6)
    gen_at = {}
    for gi, row in enumerate(case['gen']):
        gen_at.setdefault(int(row[0]), []).append(gi)
    for b in wind:
        gi = gen_at[b][0]
        case['gen'][gi, 1] = round(case['gen'][gi, 1] - E_WIND * wind_pr, 4)
    for b in solar:
        gi = gen_at[b][0]
        case['gen'][gi, 1] = round(case['gen'][gi, 1] - E_SOLAR * solar_pr, 4)

    channels = []
    for b in wind:
        channels.append({"id": "wind%d" % b, "kind": "wind", "bus": b,
                         "marginal": dict(WEIBULL),
                         "v_in": 4.0, "v_rated": 15.0, "v_out": 25.0,
                         "rated_mw": wind_pr, "power_factor": 1.0})
    for b in solar:
        channels.append({"id": "solar%d" % b, "kind": "solar", "bus": b,
                         "marginal": dict(BETA),
                         "r_c": 150.0, "r_std": 1000.0, "rated_mw": solar_pr})
    for i, row in enumerate(case['bus']):
        pd, qd = row[2], row[3]
        if pd == 0:
            continue
        s = (pd * pd + qd * qd) ** 0.5
        pf = pd / s if s > 0 else 1.0
        ch = {"id": "load%d" % int(row[0]), "kind": "load", "bus": int(row[0]),
              "marginal": {"type": "normal", "mu": round(pd, 6), "sigma": round(0.05 * pd, 6)},
              "power_factor": round(pf, 8)}
        if qd < 0:
            ch["q_sign"] = -1
        channels.append(ch)
    cfg = {"channels": channels,
           "correlation": {"wind": 0.5053, "solar": 0.8040, "load": 0.4}}
    name = out_case.split("/")[-1].replace(".m", "")
    emit_case(case, name, out_case)
    json.dump(cfg, open(out_cfg, "w"), indent=1)
    print("wrote", out_cfg, "(%d channels)" % len(channels))


build_study('cases/case39.m',
            scaled=[1, 3, 4, 15, 16, 18, 20, 21, 23, 24, 25, 26, 27, 28, 29], scale=1.10,
            wind=[32, 33, 34, 35], wind_pr=180.0,
            solar=[36, 37, 38, 39], solar_pr=120.0,
            out_case='cases/case39_ppf.m', out_cfg='cases/uncertainty39.json')

build_study('cases/case118.m',
            scaled=[19, 20, 21, 43, 44, 45, 50, 51, 52], scale=1.60,
            wind=[10, 25, 26, 49, 65, 66], wind_pr=100.0,
            solar=[12, 59, 61, 80, 89, 100], solar_pr=60.0,
            out_case='cases/case118_ppf.m', out_cfg='cases/uncertainty118.json')
