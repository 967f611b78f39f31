#include "ppflow/powerflow.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

namespace ppflow {

InjectionSet InjectionSet::from_case(const NetworkCase& c) {
    const int n = static_cast<int>(c.buses.size());
    InjectionSet inj;
    inj.p_inj = Eigen::VectorXd::Zero(n);
    inj.q_nongen = Eigen::VectorXd::Zero(n);
    inj.q_gen_fixed = Eigen::VectorXd::Zero(n);
    inj.vset = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        inj.p_inj(i) = -c.buses[i].Pd / c.base_mva;
        inj.q_nongen(i) = -c.buses[i].Qd / c.base_mva;
        if (c.buses[i].kind != BusKind::PQ) inj.vset(i) = c.buses[i].vm0;
    }
    for (const auto& g : c.generators) {
        if (!g.on) continue;
        int i = c.index_of(g.bus);
        inj.p_inj(i) += g.Pg / c.base_mva;
        if (c.buses[i].kind == BusKind::PQ)
            inj.q_gen_fixed(i) += g.Qg / c.base_mva;
        else
            inj.vset(i) = g.Vset;
    }
    return inj;
}

PowerFlowSolver::PowerFlowSolver(const NetworkCase& c) : case_(&c) {
    Y_ = build_admittance(c);
    branch_adm_.reserve(c.branches.size());
    for (const auto& br : c.branches) branch_adm_.push_back(branch_admittance(br));
    const int n = static_cast<int>(c.buses.size());
    gen_qmin_ = Eigen::VectorXd::Zero(n);
    gen_qmax_ = Eigen::VectorXd::Zero(n);
    has_gen_.assign(n, false);
    for (const auto& g : c.generators) {
        if (!g.on) continue;
        int i = c.index_of(g.bus);
        gen_qmin_(i) += g.Qmin / c.base_mva;
        gen_qmax_(i) += g.Qmax / c.base_mva;
        has_gen_[i] = true;
    }
}

PowerFlowSolution PowerFlowSolver::solve_typed(const InjectionSet& inj,
                                               const PowerFlowOptions& opts,
                                               const std::vector<BusKind>& kind,
                                               const Eigen::VectorXd& q_gen_override) const {
    const NetworkCase& c = *case_;
    const int n = static_cast<int>(c.buses.size());
    const int slack = c.slack_index();

    std::vector<int> va_pos(n, -1), vm_pos(n, -1);
    std::vector<int> pvpq, pq;
    for (int i = 0; i < n; ++i) {
        if (kind[i] == BusKind::Slack) continue;
        va_pos[i] = static_cast<int>(pvpq.size());
        pvpq.push_back(i);
    }
    for (int i = 0; i < n; ++i) {
        if (kind[i] != BusKind::PQ) continue;
        vm_pos[i] = static_cast<int>(pvpq.size() + pq.size());
        pq.push_back(i);
    }
    const int nunk = static_cast<int>(pvpq.size() + pq.size());

    Eigen::VectorXd Pspec = inj.p_inj;
    Eigen::VectorXd Qspec = inj.q_nongen + inj.q_gen_fixed + q_gen_override;

    PowerFlowSolution sol;
    sol.Vm.resize(n);
    sol.Va.setConstant(n, c.buses[slack].va0);
    for (int i = 0; i < n; ++i) {
        if (kind[i] == BusKind::PQ)
            sol.Vm(i) = opts.flat_start ? 1.0 : c.buses[i].vm0;
        else
            sol.Vm(i) = inj.vset(i) > 0.0 ? inj.vset(i) : c.buses[i].vm0;
        if (!opts.flat_start) sol.Va(i) = c.buses[i].va0;
    }
    sol.Va(slack) = c.buses[slack].va0;

    Eigen::VectorXcd V(n), S(n);
    Eigen::VectorXd P(n), Q(n), mis(nunk);

    auto compute_injections = [&]() {
        for (int i = 0; i < n; ++i) V(i) = std::polar(sol.Vm(i), sol.Va(i));
        S = V.array() * (Y_ * V).array().conjugate();
        P = S.real();
        Q = S.imag();
    };
    auto fill_mismatch = [&]() {
        double worst = 0.0;
        for (int i : pvpq) {
            double d = Pspec(i) - P(i);
            mis(va_pos[i]) = d;
            worst = std::max(worst, std::fabs(d));
        }
        for (int i : pq) {
            double d = Qspec(i) - Q(i);
            mis(vm_pos[i]) = d;
            worst = std::max(worst, std::fabs(d));
        }
        return worst;
    };

    compute_injections();
    sol.max_mismatch = fill_mismatch();
    sol.iterations = 0;

    std::vector<Eigen::Triplet<double>> trips;
    while (sol.max_mismatch > opts.tol) {
        if (sol.iterations >= opts.max_iter) {
            sol.failure = SolveFailure::IterLimit;
            break;
        }
        if (!std::isfinite(sol.max_mismatch) || sol.max_mismatch > 1e8) {
            sol.failure = SolveFailure::Diverged;
            break;
        }
        trips.clear();
        for (int col = 0; col < Y_.outerSize(); ++col) {
            for (AdmittanceMatrix::InnerIterator it(Y_, col); it; ++it) {
                const int i = static_cast<int>(it.row());
                const int j = static_cast<int>(it.col());
                const double G = it.value().real();
                const double Bv = it.value().imag();
                if (i == j) {
                    const double vi = sol.Vm(i);
                    if (va_pos[i] >= 0) {
                        trips.emplace_back(va_pos[i], va_pos[i], -Q(i) - Bv * vi * vi);
                        if (vm_pos[i] >= 0)
                            trips.emplace_back(va_pos[i], vm_pos[i], P(i) / vi + G * vi);
                    }
                    if (vm_pos[i] >= 0) {
                        trips.emplace_back(vm_pos[i], va_pos[i], P(i) - G * vi * vi);
                        trips.emplace_back(vm_pos[i], vm_pos[i], Q(i) / vi - Bv * vi * vi);
                    }
                } else {
                    const double vi = sol.Vm(i), vj = sol.Vm(j);
                    const double th = sol.Va(i) - sol.Va(j);
                    const double ct = std::cos(th), st = std::sin(th);
                    const double a = vi * vj * (G * st - Bv * ct);   // dP_i/dVa_j * -1
                    const double bb = vi * vj * (G * ct + Bv * st);  // shared block
                    if (va_pos[i] >= 0) {
                        if (va_pos[j] >= 0) trips.emplace_back(va_pos[i], va_pos[j], a);
                        if (vm_pos[j] >= 0) trips.emplace_back(va_pos[i], vm_pos[j], bb / vj);
                    }
                    if (vm_pos[i] >= 0) {
                        if (va_pos[j] >= 0) trips.emplace_back(vm_pos[i], va_pos[j], -bb);
                        if (vm_pos[j] >= 0) trips.emplace_back(vm_pos[i], vm_pos[j], a / vj);
                    }
                }
            }
        }
        Eigen::SparseMatrix<double> J(nunk, nunk);
        J.setFromTriplets(trips.begin(), trips.end());
        J.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            sol.failure = SolveFailure::SingularJacobian;
            break;
        }
        Eigen::VectorXd dx = lu.solve(mis);
        if (!dx.allFinite()) {
            sol.failure = SolveFailure::SingularJacobian;
            break;
        }
        for (int i : pvpq) sol.Va(i) += dx(va_pos[i]);
        for (int i : pq) sol.Vm(i) += dx(vm_pos[i]);
        ++sol.iterations;
        compute_injections();
        sol.max_mismatch = fill_mismatch();
    }
    sol.converged = sol.max_mismatch <= opts.tol && sol.failure == SolveFailure::None;

    // aggregate generator reactive output per bus (Eq. of the PV-bus set):
    // gen Q balances network injection plus non-generator load at the bus
    sol.Qg = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (!has_gen_[i]) continue;
        if (kind[i] == BusKind::PQ && case_->buses[i].kind == BusKind::PQ) {
            sol.Qg(i) = inj.q_gen_fixed(i);
        } else if (kind[i] == BusKind::PQ) {
            // retyped PV bus: held at the overridden limit
            sol.Qg(i) = q_gen_override(i);
        } else {
            sol.Qg(i) = Q(i) - inj.q_nongen(i);
        }
    }
    return sol;
}

PowerFlowSolution PowerFlowSolver::solve(const InjectionSet& inj,
                                         const PowerFlowOptions& opts) const {
    std::vector<BusKind> kind(case_->buses.size());
    for (std::size_t i = 0; i < kind.size(); ++i) kind[i] = case_->buses[i].kind;
    Eigen::VectorXd no_override = Eigen::VectorXd::Zero(static_cast<int>(kind.size()));
    PowerFlowSolution sol = solve_typed(inj, opts, kind, no_override);
    if (!sol.converged || !opts.enforce_q_limits) return sol;
    return enforce_q_limits(inj, sol, opts);
}

PowerFlowSolution PowerFlowSolver::enforce_q_limits(const InjectionSet& inj,
                                                    const PowerFlowSolution& start,
                                                    const PowerFlowOptions& opts) const {
    const NetworkCase& c = *case_;
    const int n = static_cast<int>(c.buses.size());
    std::vector<BusKind> kind(n);
    for (int i = 0; i < n; ++i) kind[i] = c.buses[i].kind;
    Eigen::VectorXd q_override = Eigen::VectorXd::Zero(n);

    PowerFlowSolution sol = start;
    std::vector<int> switched;
    for (int pass = 0; pass < opts.q_limit_passes; ++pass) {
        if (!sol.converged) return sol;
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            if (kind[i] != BusKind::PV || !has_gen_[i]) continue;
            double qg = sol.Qg(i);
            double fix;
            if (qg > gen_qmax_(i))
                fix = gen_qmax_(i);
            else if (qg < gen_qmin_(i))
                fix = gen_qmin_(i);
            else
                continue;
            kind[i] = BusKind::PQ;
            q_override(i) = fix;
            switched.push_back(c.buses[i].id);
            changed = true;
        }
        if (!changed) {
            sol.pv_to_pq_switches = switched;
            return sol;
        }
        sol = solve_typed(inj, opts, kind, q_override);
        sol.pv_to_pq_switches = switched;
    }
    // still finding fresh violations at the pass cap
    bool pending = false;
    for (int i = 0; i < n; ++i)
        if (kind[i] == BusKind::PV && has_gen_[i] &&
            (sol.Qg(i) > gen_qmax_(i) || sol.Qg(i) < gen_qmin_(i)))
            pending = true;
    if (pending) {
        sol.converged = false;
        sol.failure = SolveFailure::OscillatingLimits;
    }
    return sol;
}

PowerFlowSolution solve(const NetworkCase& c, const InjectionSet& inj,
                        const PowerFlowOptions& opts) {
    return PowerFlowSolver(c).solve(inj, opts);
}

ResponseSpec::ResponseSpec(std::vector<Response> items, const NetworkCase& c)
    : items_(std::move(items)) {
    if (items_.empty()) throw SemanticError("response spec is empty");
    for (const auto& item : items_) {
        std::ostringstream label;
        if (const auto* vm = std::get_if<VmAt>(&item)) {
            c.index_of(vm->bus);
            label << "vm:" << vm->bus;
            branch_index_.push_back(-1);
        } else if (const auto* fl = std::get_if<FlowAt>(&item)) {
            int seen = 0, found = -1;
            for (std::size_t k = 0; k < c.branches.size(); ++k) {
                if (c.branches[k].from == fl->from && c.branches[k].to == fl->to) {
                    if (++seen == fl->ordinal) {
                        found = static_cast<int>(k);
                        break;
                    }
                }
            }
            if (found < 0)
                throw SemanticError("response references unknown branch " +
                                    std::to_string(fl->from) + "-" + std::to_string(fl->to));
            branch_index_.push_back(found);
            label << "sf:" << fl->from << "-" << fl->to;
            if (fl->ordinal > 1) label << "#" << fl->ordinal;
            if (!fl->from_end) label << ":to";
        } else {
            const auto& qg = std::get<QgAt>(item);
            int i = c.index_of(qg.bus);
            bool any = false;
            for (const auto& g : c.generators)
                if (g.on && c.index_of(g.bus) == i) any = true;
            if (!any)
                throw SemanticError("response qg:" + std::to_string(qg.bus) +
                                    " references a bus without generators");
            label << "qg:" << qg.bus;
            branch_index_.push_back(-1);
        }
        labels_.push_back(label.str());
    }
}

ResponseSpec ResponseSpec::parse(const std::string& text, const NetworkCase& c) {
    std::vector<Response> items;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        // trim
        auto b = token.find_first_not_of(" \t\r\n");
        auto e = token.find_last_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        token = token.substr(b, e - b + 1);
        std::vector<std::string> parts;
        std::istringstream ts(token);
        std::string part;
        while (std::getline(ts, part, ':')) parts.push_back(part);
        if (parts.size() < 2) throw ParseError("bad response token '" + token + "'");
        try {
            if (parts[0] == "vm") {
                items.push_back(VmAt{std::stoi(parts[1])});
            } else if (parts[0] == "qg") {
                items.push_back(QgAt{std::stoi(parts[1])});
            } else if (parts[0] == "sf") {
                std::string ft = parts[1];
                int ordinal = 1;
                auto hash = ft.find('#');
                if (hash != std::string::npos) {
                    ordinal = std::stoi(ft.substr(hash + 1));
                    ft.resize(hash);
                }
                auto dash = ft.find('-');
                if (dash == std::string::npos)
                    throw ParseError("bad branch in response token '" + token + "'");
                bool from_end = true;
                if (parts.size() >= 3) {
                    if (parts[2] == "to")
                        from_end = false;
                    else if (parts[2] != "from")
                        throw ParseError("bad branch end '" + parts[2] + "'");
                }
                items.push_back(FlowAt{std::stoi(ft.substr(0, dash)),
                                       std::stoi(ft.substr(dash + 1)), ordinal, from_end});
            } else {
                throw ParseError("unknown response kind '" + parts[0] + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number in response token '" + token + "'");
        }
    }
    return ResponseSpec(std::move(items), c);
}

std::string ResponseSpec::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) out += ",";
        out += labels_[i];
    }
    return out;
}

Eigen::VectorXd extract_responses(const NetworkCase& c, const PowerFlowSolution& sol,
                                  const ResponseSpec& spec) {
    Eigen::VectorXd out(static_cast<int>(spec.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const Response& item = spec[k];
        if (const auto* vm = std::get_if<VmAt>(&item)) {
            out(static_cast<int>(k)) = sol.Vm(c.index_of(vm->bus));
        } else if (const auto* fl = std::get_if<FlowAt>(&item)) {
            const Branch& br = c.branches[spec.branch_index_[k]];
            BranchAdmittance a = branch_admittance(br);
            int f = c.index_of(br.from), t = c.index_of(br.to);
            std::complex<double> Vf = std::polar(sol.Vm(f), sol.Va(f));
            std::complex<double> Vt = std::polar(sol.Vm(t), sol.Va(t));
            std::complex<double> S;
            if (!br.on) {
                S = 0.0;
            } else if (fl->from_end) {
                S = Vf * std::conj(a.yff * Vf + a.yft * Vt);
            } else {
                S = Vt * std::conj(a.ytf * Vf + a.ytt * Vt);
            }
            out(static_cast<int>(k)) = std::abs(S);
        } else {
            const auto& qg = std::get<QgAt>(item);
            out(static_cast<int>(k)) = sol.Qg(c.index_of(qg.bus));
        }
    }
    return out;
}

} // namespace ppflow
