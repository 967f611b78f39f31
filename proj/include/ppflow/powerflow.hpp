#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ppflow/casedata.hpp"

namespace ppflow {

// Specified injections for one power-flow solve, per bus position, in pu.
// Generator reactive output is kept out of q_nongen so reactive-limit
// checks can recover it from the solved state.
struct InjectionSet {
    Eigen::VectorXd p_inj;        // net specified P (gen + renewables - load)
    Eigen::VectorXd q_nongen;     // non-generator net Q (renewables - load)
    Eigen::VectorXd q_gen_fixed;  // fixed gen Q at PQ buses
    Eigen::VectorXd vset;         // setpoints at PV/slack buses (0 elsewhere)

    // base-case injections: loads and generator schedules from the case
    static InjectionSet from_case(const NetworkCase& c);
};

enum class SolveFailure { None, IterLimit, Diverged, SingularJacobian, OscillatingLimits };

struct PowerFlowSolution {
    Eigen::VectorXd Vm;            // pu
    Eigen::VectorXd Va;            // rad
    Eigen::VectorXd Qg;            // aggregate generator reactive per bus, pu
    bool converged = false;
    SolveFailure failure = SolveFailure::None;
    int iterations = 0;
    double max_mismatch = 0.0;
    std::vector<int> pv_to_pq_switches;  // bus ids retyped by limit enforcement
};

struct PowerFlowOptions {
    double tol = 1e-8;
    int max_iter = 30;
    bool flat_start = true;
    bool enforce_q_limits = true;
    int q_limit_passes = 10;
};

// Reusable solver bound to one case (admittance and typing precomputed);
// solves are const and safe to run concurrently.
class PowerFlowSolver {
  public:
    explicit PowerFlowSolver(const NetworkCase& c);

    PowerFlowSolution solve(const InjectionSet& inj, const PowerFlowOptions& opts = {}) const;

    // One reactive-limit pass loop on top of a converged solution for the
    // given typing; exposed separately for targeted tests.
    PowerFlowSolution enforce_q_limits(const InjectionSet& inj, const PowerFlowSolution& sol,
                                       const PowerFlowOptions& opts) const;

    const NetworkCase& network() const { return *case_; }

  private:
    PowerFlowSolution solve_typed(const InjectionSet& inj, const PowerFlowOptions& opts,
                                  const std::vector<BusKind>& kind,
                                  const Eigen::VectorXd& q_gen_override) const;

    const NetworkCase* case_;
    AdmittanceMatrix Y_;
    std::vector<BranchAdmittance> branch_adm_;
    Eigen::VectorXd gen_qmin_, gen_qmax_;  // aggregate per bus, pu
    std::vector<bool> has_gen_;
};

PowerFlowSolution solve(const NetworkCase& c, const InjectionSet& inj,
                        const PowerFlowOptions& opts = {});

// Response identifiers: bus voltage magnitude, branch apparent flow at one
// end, generator reactive power.
struct VmAt {
    int bus;
};
struct FlowAt {
    int from;
    int to;
    int ordinal;   // among parallel branches with the same end buses
    bool from_end; // measurement end
};
struct QgAt {
    int bus;
};
using Response = std::variant<VmAt, FlowAt, QgAt>;

class ResponseSpec {
  public:
    ResponseSpec() = default;
    ResponseSpec(std::vector<Response> items, const NetworkCase& c);

    // textual form: comma-separated "vm:8", "sf:13-14", "sf:13-14:to",
    // "sf:42-49#2", "qg:32"
    static ResponseSpec parse(const std::string& text, const NetworkCase& c);

    std::size_t size() const { return items_.size(); }
    const Response& operator[](std::size_t i) const { return items_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string to_string() const;

  private:
    std::vector<Response> items_;
    std::vector<std::string> labels_;
    std::vector<int> branch_index_;  // resolved branch positions for FlowAt
    friend Eigen::VectorXd extract_responses(const NetworkCase&, const PowerFlowSolution&,
                                             const ResponseSpec&);
};

// Ordered response vector: VM in pu, SF as apparent-power magnitude in pu
// of baseMVA at the requested end, QG in pu.
Eigen::VectorXd extract_responses(const NetworkCase& c, const PowerFlowSolution& sol,
                                  const ResponseSpec& spec);

} // namespace ppflow
