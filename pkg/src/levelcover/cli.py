"""Stream harness: parse instances and update streams, drive any mode,
emit machine-readable reports, generate synthetic streams, and persist
and restore snapshots.

Exit codes: 0 ok, 1 usage/parse, 2 runtime, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

import json

from . import dynamic, extensions, extract, oracle, potential, streams
from .core import Mode, VertexAttrs, derive_parameters, new_instance
from .errors import EdgeError, InstanceError, LevelCoverError, SnapshotError
from .formats import (
    InstanceSpec,
    ParseError,
    canonical_json,
    fmt_float,
    parse_instance,
    parse_stream,
    render_instance,
    render_stream,
    read_snapshot,
    write_snapshot,
    _engine_lines,
    _restore_engine,
)

RATIO_TOL = 1e-6


def _vertex_lines(vertices):
    return ["vertex %d cost=%s cap=%d" % (a.id, fmt_float(a.cost), a.capacity)
            for a in vertices]


def _parse_vertex_lines(lines, path):
    out = []
    for line in lines:
        toks = line.split()
        if toks[0] != "vertex":
            raise SnapshotError("%s: bad vertex line %r" % (path, line))
        kv = dict(t.split("=", 1) for t in toks[2:])
        out.append(VertexAttrs(int(toks[1]), float(kv["cost"]), int(kv["cap"])))
    return out


def _spec_header(spec, params):
    head = {
        "mode": spec.mode.value,
        "beta": fmt_float(params.beta),
        "epsilon": fmt_float(params.epsilon),
        "budget": str(params.size_budget),
        "band": "%s %s" % (fmt_float(params.c_min), fmt_float(params.c_max)),
    }
    if spec.mode is Mode.SET_COVER:
        head["f"] = str(params.f)
    if spec.mode is Mode.DEMAND_SPLIT:
        head["dmax"] = str(params.d_max)
    return head


def _header_to_spec(header, vertices):
    spec = InstanceSpec()
    spec.mode = Mode(header["mode"])
    spec.beta = float(header["beta"])
    spec.epsilon = float(header["epsilon"])
    spec.budget = int(header["budget"])
    spec.f = int(header["f"]) if "f" in header else None
    spec.d_max = int(header["dmax"]) if "dmax" in header else None
    spec.vertices = vertices
    band = header["band"].split()
    return spec, (float(band[0]), float(band[1]))


def _levels_histogram(state):
    hist = [0] * (state.params.levels + 1)
    for v in range(state.n):
        hist[state.level(v)] += 1
    return hist


def _max_copies(state):
    h = 0
    for v in range(state.n):
        h = max(h, extract.vertex_copies(state, v))
    return h


def _base_report(t, cost, dual, theoretical, hist, count_ops, h):
    return {
        "t": t,
        "cost": cost,
        "dual_lb": dual,
        "empirical_ratio": extract.empirical_ratio(cost, dual),
        "theoretical_ratio": theoretical,
        "levels_histogram": hist,
        "count_ops_cumulative": count_ops,
        "h": h,
    }


def _invariant_failures(state, tight_factor, tag=""):
    fails = []
    for v, w, c in oracle.check_valid(state):
        fails.append("%svalidity: vertex %d weight %.12g > cost %.12g" % (tag, v, w, c))
    for item in oracle.check_invariant1(state):
        fails.append("%sinvariant1: %r" % (tag, item))
    if not oracle.check_tightness(state, tight_factor):
        fails.append("%stightness factor %.6g violated" % (tag, tight_factor))
    for item in oracle.check_cover_property(state):
        fails.append("%scover-property: %r" % (tag, item))
    cert = extract.dual_certificate(state)
    if not oracle.check_dual_feasible(cert, state):
        fails.append("%sdual certificate infeasible" % tag)
    agreement = oracle.weight_agreement(state)
    if agreement > oracle.REL_TOL:
        fails.append("%sweight drift %.3g" % (tag, agreement))
    return fails


def _ratio_failure(cost, dual, theoretical):
    if cost > theoretical * dual + RATIO_TOL:
        return ["ratio-bound: cost %.12g > %.6g x dual %.12g"
                % (cost, theoretical, dual)]
    return []


class EngineDriver:
    """capacitated / weightedvc / setcover over one GraphState."""

    kind = "engine"

    def __init__(self, spec, cost_band=None):
        self.spec = spec
        self.state = new_instance(
            spec.vertices, spec.beta, spec.epsilon, spec.mode, spec.budget,
            f=spec.f, d_max=spec.d_max, cost_band=cost_band)
        self.tracker = None

    def stream_t(self):
        return self.state.updates_applied

    def attach_potential(self):
        self.tracker = potential.PotentialTracker.attach(self.state)

    def apply(self, op):
        st = self.state
        if op.kind == "insert":
            if st.params.mode is Mode.SET_COVER:
                raise InstanceError("set-cover streams use +e/-e ops")
            u, v, d = op.payload
            return dynamic.insert_edge(st, u, v, d)
        if op.kind == "delete":
            if st.params.mode is Mode.SET_COVER:
                raise InstanceError("set-cover streams use +e/-e ops")
            return dynamic.delete_edge(st, *op.payload)
        if op.kind == "inserthyper":
            eid, ends = op.payload
            return extensions.insert_hyperedge(st, ends, eid)
        if op.kind == "deletehyper":
            return extensions.delete_hyperedge(st, op.payload[0])
        raise InstanceError("unsupported op %r in %s mode"
                            % (op.kind, st.params.mode.value))

    def query_report(self, t):
        st = self.state
        cov = extract.current_cover(st)
        cert = extract.dual_certificate(st)
        theoretical = extract.bound_ratio(st)
        rep = _base_report(t, cov.cost, cert.value, theoretical,
                           _levels_histogram(st), st.touched_total,
                           _max_copies(st))
        return rep, _ratio_failure(cov.cost, cert.value, theoretical)

    def verify_update(self):
        return _invariant_failures(self.state, self.state.tight_factor)

    def verify_query(self):
        st = self.state
        opt = oracle.brute_force_opt(st)["cost"]
        cov = extract.current_cover(st)
        cert = extract.dual_certificate(st)
        fails = []
        if cert.value > opt + oracle.ABS_TOL:
            fails.append("oracle: dual %.12g exceeds OPT %.12g" % (cert.value, opt))
        if cov.cost < opt - oracle.ABS_TOL:
            fails.append("oracle: cover cost %.12g below OPT %.12g (infeasible?)"
                         % (cov.cost, opt))
        bound = extract.bound_ratio(st)
        if opt > 0 and cov.cost > bound * opt + RATIO_TOL:
            fails.append("oracle: cost/OPT %.4g exceeds bound %.4g"
                         % (cov.cost / opt, bound))
        return fails, opt

    def wall_ops(self):
        return self.state._ops

    def save(self, path):
        head = _spec_header(self.spec, self.state.params)
        head["kind"] = self.kind
        write_snapshot(path, head, [
            ("vertices", _vertex_lines(self.spec.vertices)),
            ("engine", _engine_lines(self.state)),
        ])

    @classmethod
    def load(cls, header, sections, path):
        body = dict(sections)
        vertices = _parse_vertex_lines(body["vertices"], path)
        spec, band = _header_to_spec(header, vertices)
        driver = cls(spec, cost_band=band)
        _restore_engine(driver.state, body["engine"], path)
        return driver


class ClusterDriver:
    kind = "cluster"

    def __init__(self, spec, cost_band=None):
        self.spec = spec
        self.cost_band = cost_band or (
            min(a.cost for a in spec.vertices), max(a.cost for a in spec.vertices))
        self.manager = extensions.ClusterManager(
            spec.vertices, spec.beta, spec.epsilon, spec.budget,
            cost_band=self.cost_band)
        k_max = max(a.capacity for a in spec.vertices)
        self._cluster_params = derive_parameters(
            Mode.DEMAND_CLUSTER, spec.beta, spec.epsilon, spec.budget,
            self.cost_band[0], self.cost_band[1], k_max)

    def stream_t(self):
        return self.manager.updates_applied

    def attach_potential(self):
        raise InstanceError("potential tracking is not defined for demand modes")

    def apply(self, op):
        if op.kind == "insert":
            u, v, d = op.payload
            return self.manager.insert(u, v, d)
        if op.kind == "delete":
            return self.manager.delete(*op.payload)
        raise InstanceError("unsupported op %r in cluster mode" % op.kind)

    def query_report(self, t):
        parts = self.manager.query_parts()
        cost = sum(p[2].cost for p in parts)
        dual = max((p[3].value for p in parts), default=0.0)
        per = self._cluster_params.tight_factor * (
            2.0 * self._cluster_params.beta / (self._cluster_params.beta - 1.0) + 1.0)
        theoretical = max(1, len(parts)) * per
        levels = self._cluster_params.levels
        hist = [0] * (levels + 1)
        h = 0
        count_ops = 0
        for _, st, cov, _ in parts:
            for v in range(st.n):
                hist[st.level(v)] += 1
            h = max(h, max(cov.copies, default=0))
        for st in self.manager.clusters.values():
            count_ops += st.touched_total
        rep = _base_report(t, cost, dual, theoretical, hist, count_ops, h)
        return rep, _ratio_failure(cost, dual, theoretical)

    def verify_update(self):
        fails = []
        for idx in self.manager.active_clusters():
            st = self.manager.clusters[idx]
            fails.extend(_invariant_failures(
                st, st.tight_factor, tag="cluster %d: " % idx))
        # coverage feasibility of the union cover
        for idx, st, cov, _ in self.manager.query_parts():
            loads = [0] * st.n
            for eid, owner in cov.assignment.items():
                loads[owner] += st.edges[eid].demand
            for v in range(st.n):
                if loads[v] > st.cap[v] * cov.copies[v]:
                    fails.append("cluster %d: vertex %d overloaded" % (idx, v))
        return fails

    def verify_query(self):
        edges = self.manager.all_demand_edges()
        costs = [a.cost for a in self.spec.vertices]
        caps = [a.capacity for a in self.spec.vertices]
        opt, _ = oracle.brute_force_orientations(costs, caps, edges)
        parts = self.manager.query_parts()
        cost = sum(p[2].cost for p in parts)
        dual = max((p[3].value for p in parts), default=0.0)
        fails = []
        if dual > opt + oracle.ABS_TOL:
            fails.append("oracle: dual %.12g exceeds OPT %.12g" % (dual, opt))
        if cost < opt - oracle.ABS_TOL:
            fails.append("oracle: union cost %.12g below OPT %.12g" % (cost, opt))
        return fails, opt

    def wall_ops(self):
        return sum(st._ops for st in self.manager.clusters.values())

    def save(self, path):
        head = _spec_header(self.spec, self._cluster_params)
        head["kind"] = self.kind
        head["manager"] = "t=%d" % self.manager.updates_applied
        sections = [("vertices", _vertex_lines(self.spec.vertices))]
        for idx in sorted(self.manager.clusters):
            sections.append(("cluster-%d" % idx,
                             _engine_lines(self.manager.clusters[idx])))
        write_snapshot(path, head, sections)

    @classmethod
    def load(cls, header, sections, path):
        body = dict(sections)
        vertices = _parse_vertex_lines(body["vertices"], path)
        spec, band = _header_to_spec(header, vertices)
        driver = cls(spec, cost_band=band)
        mk = dict(t.split("=", 1) for t in header["manager"].split())
        driver.manager.updates_applied = int(mk["t"])
        for name, lines in sections:
            if not name.startswith("cluster-"):
                continue
            idx = int(name.split("-", 1)[1])
            st = driver.manager._cluster(idx)
            _restore_engine(st, lines, path)
            for eid in sorted(st.edges):
                e = st.edges[eid]
                driver.manager.pair_cluster[e.ends] = idx
        return driver


class SplitDriver:
    kind = "split"

    def __init__(self, spec, cost_band=None):
        if spec.d_max is None:
            raise InstanceError("split mode needs 'mode demandsplit dmax=<int>'")
        self.spec = spec
        self.split = extensions.SplitState(
            spec.vertices, spec.beta, spec.epsilon, spec.d_max, spec.budget,
            cost_band=cost_band)

    def stream_t(self):
        return self.split.updates_applied

    def attach_potential(self):
        raise InstanceError("potential tracking is not defined for demand modes")

    def apply(self, op):
        if op.kind == "insert":
            u, v, d = op.payload
            return self.split.insert(u, v, d)
        if op.kind == "delete":
            return self.split.delete(*op.payload)
        raise InstanceError("unsupported op %r in split mode" % op.kind)

    def query_report(self, t):
        sc = extensions.demand_split_extract(self.split)
        cert = extensions.demand_split_certificate(self.split)
        theoretical = 2.0 * extract.bound_ratio(self.split.base)
        st = self.split.base
        rep = _base_report(t, sc.cover.cost, cert.value, theoretical,
                           _levels_histogram(st), st.touched_total,
                           max(sc.cover.copies, default=0))
        return rep, _ratio_failure(sc.cover.cost, cert.value, theoretical)

    def verify_update(self):
        base = self.split.base
        fails = _invariant_failures(base, base.tight_factor, tag="base: ")
        for pid, parent in self.split.parents.items():
            if len(parent.replicas) != parent.demand:
                fails.append("split: parent %d replica count mismatch" % pid)
        sc = extensions.demand_split_extract(self.split)
        loads = [0] * base.n
        for pid, owner in sc.cover.assignment.items():
            loads[owner] += self.split.parents[pid].demand
        for v in range(base.n):
            if loads[v] > base.cap[v] * sc.cover.copies[v]:
                fails.append("split: vertex %d overloaded" % v)
        cert = extensions.demand_split_certificate(self.split)
        edge_map = {pid: (p.ends, p.demand) for pid, p in self.split.parents.items()}
        if not oracle.check_dual_feasible_view(cert, base.cost, base.cap, edge_map):
            fails.append("split: aggregated certificate infeasible")
        return fails

    def verify_query(self):
        base = self.split.base
        edges = [(p.ends, p.demand) for p in self.split.parents.values()]
        opt, _ = oracle.brute_force_orientations(base.cost, base.cap, edges)
        sc = extensions.demand_split_extract(self.split)
        cert = extensions.demand_split_certificate(self.split)
        fails = []
        if cert.value > opt + oracle.ABS_TOL:
            fails.append("oracle: dual %.12g exceeds OPT %.12g" % (cert.value, opt))
        if sc.cover.cost < opt - oracle.ABS_TOL:
            fails.append("oracle: cover cost below OPT")
        return fails, opt

    def wall_ops(self):
        return self.split.base._ops

    def save(self, path):
        head = _spec_header(self.spec, self.split.base.params)
        head["kind"] = self.kind
        head["splitmeta"] = "nextpid=%d t=%d" % (
            self.split.next_pid, self.split.updates_applied)
        parents = []
        for pid in sorted(self.split.parents):
            p = self.split.parents[pid]
            parents.append("parent %d %d %d d=%d replicas=%s" % (
                pid, p.ends[0], p.ends[1], p.demand,
                ",".join(str(r) for r in p.replicas)))
        write_snapshot(path, head, [
            ("vertices", _vertex_lines(self.spec.vertices)),
            ("engine", _engine_lines(self.split.base)),
            ("parents", parents),
        ])

    @classmethod
    def load(cls, header, sections, path):
        body = dict(sections)
        vertices = _parse_vertex_lines(body["vertices"], path)
        spec, band = _header_to_spec(header, vertices)
        driver = cls(spec, cost_band=band)
        _restore_engine(driver.split.base, body["engine"], path)
        mk = dict(t.split("=", 1) for t in header["splitmeta"].split())
        driver.split.next_pid = int(mk["nextpid"])
        driver.split.updates_applied = int(mk["t"])
        for line in body["parents"]:
            toks = line.split()
            pid = int(toks[1])
            pair = (int(toks[2]), int(toks[3]))
            kv = dict(t.split("=", 1) for t in toks[4:])
            replicas = [int(x) for x in kv["replicas"].split(",")]
            parent = extensions.SplitParent(pid, pair, int(kv["d"]), replicas)
            driver.split.parents[pid] = parent
            driver.split.pair_pid[pair] = pid
        return driver


class StaticDemandDriver:
    """Collects demand edges; every query solves the instance from scratch."""

    kind = "demandstatic"

    def __init__(self, spec, cost_band=None):
        self.spec = spec
        self.cost_band = cost_band or (
            min(a.cost for a in spec.vertices), max(a.cost for a in spec.vertices))
        self.live = {}
        self.updates_applied = 0
        self._solve_ops = 0

    def stream_t(self):
        return self.updates_applied

    def attach_potential(self):
        raise InstanceError("potential tracking is not defined for demand modes")

    def apply(self, op):
        if op.kind == "insert":
            u, v, d = op.payload
            pair = tuple(sorted((u, v)))
            if pair in self.live:
                raise EdgeError("edge %r already present" % (pair,))
            self.live[pair] = d
            self.updates_applied += 1
            return dynamic.UpdateReport(touched_edges=1, wall_ops=1)
        if op.kind == "delete":
            pair = tuple(sorted(op.payload))
            if pair not in self.live:
                raise EdgeError("edge %r not present" % (pair,))
            del self.live[pair]
            self.updates_applied += 1
            return dynamic.UpdateReport(touched_edges=1, wall_ops=1)
        raise InstanceError("unsupported op %r in demandstatic mode" % op.kind)

    def _solve(self):
        inst = extensions.build_demand_instance(
            self.spec.vertices,
            [(pair, d) for pair, d in sorted(self.live.items())],
            self.spec.beta, self.spec.epsilon, self.spec.budget,
            cost_band=self.cost_band)
        cov, cert = extensions.solve_demand_static(inst)
        self._solve_ops += inst._ops
        return inst, cov, cert

    def query_report(self, t):
        inst, cov, cert = self._solve()
        theoretical = extract.bound_ratio(inst)
        rep = _base_report(t, cov.cost, cert.value, theoretical,
                           _levels_histogram(inst), self._solve_ops,
                           _max_copies(inst))
        return rep, _ratio_failure(cov.cost, cert.value, theoretical)

    def verify_update(self):
        return []

    def verify_query(self):
        inst, cov, cert = self._solve()
        fails = []
        if oracle.check_valid(inst):
            fails.append("static: output scheme invalid")
        if not oracle.check_tightness(inst, inst.params.beta + 1.0):
            fails.append("static: output not tight")
        if not oracle.check_dual_feasible(cert, inst):
            fails.append("static: certificate infeasible")
        loads = [0] * inst.n
        for eid, owner in cov.assignment.items():
            loads[owner] += inst.edges[eid].demand
        for v in range(inst.n):
            if loads[v] > inst.cap[v] * cov.copies[v]:
                fails.append("static: vertex %d overloaded" % v)
        costs = [a.cost for a in self.spec.vertices]
        caps = [a.capacity for a in self.spec.vertices]
        opt, _ = oracle.brute_force_orientations(
            costs, caps, [(pair, d) for pair, d in sorted(self.live.items())])
        if cert.value > opt + oracle.ABS_TOL:
            fails.append("oracle: dual exceeds OPT")
        if cov.cost < opt - oracle.ABS_TOL:
            fails.append("oracle: cover cost below OPT")
        return fails, opt

    def wall_ops(self):
        return self._solve_ops + self.updates_applied

    def save(self, path):
        params = derive_parameters(
            Mode.DEMAND_STATIC, self.spec.beta, self.spec.epsilon,
            self.spec.budget, self.cost_band[0], self.cost_band[1],
            max(a.capacity for a in self.spec.vertices))
        head = _spec_header(self.spec, params)
        head["kind"] = self.kind
        head["staticmeta"] = "t=%d solveops=%d" % (
            self.updates_applied, self._solve_ops)
        edges = ["demand %d %d d=%d" % (p[0], p[1], d)
                 for p, d in sorted(self.live.items())]
        write_snapshot(path, head, [
            ("vertices", _vertex_lines(self.spec.vertices)),
            ("edges", edges),
        ])

    @classmethod
    def load(cls, header, sections, path):
        body = dict(sections)
        vertices = _parse_vertex_lines(body["vertices"], path)
        spec, band = _header_to_spec(header, vertices)
        driver = cls(spec, cost_band=band)
        mk = dict(t.split("=", 1) for t in header["staticmeta"].split())
        driver.updates_applied = int(mk["t"])
        driver._solve_ops = int(mk["solveops"])
        for line in body["edges"]:
            toks = line.split()
            kv = dict(t.split("=", 1) for t in toks[3:])
            driver.live[(int(toks[1]), int(toks[2]))] = int(kv["d"])
        return driver


_DRIVERS = {
    Mode.CAPACITATED: EngineDriver,
    Mode.WEIGHTED_VC: EngineDriver,
    Mode.SET_COVER: EngineDriver,
    Mode.DEMAND_CLUSTER: ClusterDriver,
    Mode.DEMAND_SPLIT: SplitDriver,
    Mode.DEMAND_STATIC: StaticDemandDriver,
}

_DRIVER_KINDS = {
    "engine": EngineDriver,
    "cluster": ClusterDriver,
    "split": SplitDriver,
    "demandstatic": StaticDemandDriver,
}


def build_driver(spec):
    return _DRIVERS[spec.mode](spec)


def load_driver(path):
    header, sections = read_snapshot(path)
    kind = header.get("kind")
    if kind not in _DRIVER_KINDS:
        raise SnapshotError("%s: unknown driver kind %r" % (path, kind))
    return _DRIVER_KINDS[kind].load(header, sections, path)


class RunResult:
    def __init__(self):
        self.reports = []
        self.updates = 0
        self.failures = 0
        self.exit_code = 0
        self.driver = None


def run_ops(driver, ops, verify="none", out=None, resume_t=None):
    """Apply parsed stream ops; returns a RunResult (raises on runtime errors)."""
    result = RunResult()
    result.driver = driver
    t = driver.stream_t() if resume_t is None else resume_t
    pending = []
    for op in ops:
        if op.kind == "query":
            rep, ratio_fails = driver.query_report(t)
            pending.extend(ratio_fails)
            if verify == "oracle":
                fails, _ = driver.verify_query()
                pending.extend(fails)
            tracker = getattr(driver, "tracker", None)
            if tracker is not None:
                rep["potential"] = tracker.bank()
                for res in tracker.drain_failures():
                    pending.append("potential %s margin %.3g at t=%d"
                                   % (res.kind, res.margin, res.detail.get("t", -1)))
            if pending:
                rep["check_failures"] = pending
                result.failures += len(pending)
                pending = []
            line = canonical_json(rep)
            result.reports.append(line)
            if out is not None:
                out.write(line + "\n")
        elif op.kind == "snapshot":
            driver.save(op.payload[0])
        else:
            t += 1
            driver.apply(op)
            result.updates += 1
            if verify in ("invariants", "oracle"):
                pending.extend(driver.verify_update())
    tracker = getattr(driver, "tracker", None)
    if tracker is not None:
        for res in tracker.drain_failures():
            pending.append("potential %s margin %.3g" % (res.kind, res.margin))
    result.failures += len(pending)
    result.exit_code = 3 if result.failures else 0
    result.final_t = t
    return result


def run_files(instance_path, stream_path, verify="none", use_potential=False,
              out=None, overrides=None):
    with open(instance_path) as fh:
        spec = parse_instance(fh.read(), instance_path)
    if overrides:
        for key, value in overrides.items():
            if value is not None:
                setattr(spec, key, value)
    with open(stream_path) as fh:
        ops = parse_stream(fh.read(), stream_path)
    driver = build_driver(spec)
    if use_potential:
        driver.attach_potential()
    return run_ops(driver, ops, verify=verify, out=out)


# -- subcommands ------------------------------------------------------------------


def _cmd_run(args):
    out = sys.stdout
    fh = None
    if args.out:
        fh = open(args.out, "w")
        out = fh
    overrides = {"beta": args.beta, "epsilon": args.epsilon,
                 "mode": Mode(args.mode) if args.mode else None}
    try:
        result = run_files(args.instance, args.stream, verify=args.verify,
                           use_potential=args.potential, out=out,
                           overrides=overrides)
    finally:
        if fh is not None:
            fh.close()
    if result.failures:
        print("verification failures: %d" % result.failures, file=sys.stderr)
    return result.exit_code


def _cmd_generate(args):
    ops = streams.generate(
        args.family, args.seed, n=args.n, T=args.T, window=args.window,
        query_every=args.query_every, demand_max=args.demand_max,
        hyper_f=args.hyper_f, live_cap=args.live_cap)
    text = render_stream(ops)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen_instance(args):
    spec = streams.random_instance(
        args.n, args.seed, mode=args.mode, beta=args.beta,
        epsilon=args.epsilon, cost_lo=args.cost_lo, cost_hi=args.cost_hi,
        cap_hi=args.cap_hi, budget=args.budget,
        f=args.hyper_f if args.mode == "setcover" else None,
        d_max=args.demand_max if args.mode == "demandsplit" else None)
    text = render_instance(spec)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_seed_range(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(s) for s in text.split(",")]


def _cmd_sweep(args):
    worst = 0
    for seed in _parse_seed_range(args.seeds):
        spec = streams.random_instance(
            args.n, seed, mode=args.mode, beta=args.beta, epsilon=args.epsilon)
        ops = streams.generate(args.family, seed, n=args.n, T=args.T,
                               window=args.window,
                               query_every=args.query_every,
                               demand_max=args.demand_max)
        driver = build_driver(spec)
        result = run_ops(driver, ops, verify=args.verify)
        max_ratio = 0.0
        for line in result.reports:
            rep = json.loads(line)
            if rep["dual_lb"] > 0:
                max_ratio = max(max_ratio, rep["empirical_ratio"])
        cell = {"seed": seed, "updates": result.updates,
                "failures": result.failures, "max_empirical_ratio": max_ratio}
        sys.stdout.write(canonical_json(cell) + "\n")
        worst = max(worst, result.exit_code)
    return worst


def make_parser():
    parser = argparse.ArgumentParser(
        prog="levelcover",
        description="Dynamic capacitated cover maintenance harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="apply a stream to an instance")
    p.add_argument("instance")
    p.add_argument("stream")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--verify", choices=("none", "invariants", "oracle"),
                   default="none")
    p.add_argument("--potential", action="store_true",
                   help="enable bank-account accounting assertions")
    p.add_argument("--seed", type=int, default=0, help="reserved for symmetry")
    p.add_argument("--out", default=None, help="write reports here instead of stdout")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("generate", help="emit a synthetic update stream")
    p.add_argument("family", choices=streams.FAMILIES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-T", type=int, required=True)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--query-every", type=int, default=0)
    p.add_argument("--demand-max", type=int, default=1)
    p.add_argument("--hyper-f", type=int, default=0)
    p.add_argument("--live-cap", type=int, default=streams.CHURN_LIVE_CAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("gen-instance", help="emit a random instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode],
                   default="capacitated")
    p.add_argument("--beta", type=float, default=2.43)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--cost-lo", type=float, default=1.0)
    p.add_argument("--cost-hi", type=float, default=4.0)
    p.add_argument("--cap-hi", type=int, default=3)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--hyper-f", type=int, default=3)
    p.add_argument("--demand-max", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen_instance)

    p = sub.add_parser("sweep", help="run independent (seed, param) cells")
    p.add_argument("--family", choices=streams.FAMILIES, default="erdos-churn")
    p.add_argument("--seeds", default="0:8", help="lo:hi or comma list")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("-T", type=int, default=200)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--query-every", type=int, default=10)
    p.add_argument("--demand-max", type=int, default=1)
    p.add_argument("--mode", choices=[m.value for m in Mode],
                   default="capacitated")
    p.add_argument("--beta", type=float, default=2.43)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--verify", choices=("none", "invariants", "oracle"),
                   default="invariants")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; the harness contract says 1
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except InstanceError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (LevelCoverError, OSError) as exc:
        print("runtime error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
