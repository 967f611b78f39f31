#pragma once

#include <complex>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "ppflow/errors.hpp"

namespace ppflow {

enum class BusKind { Slack, PV, PQ };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::PQ;
    double Pd = 0.0;      // MW
    double Qd = 0.0;      // Mvar
    double Gs = 0.0;      // MW at V = 1 pu
    double Bs = 0.0;      // Mvar at V = 1 pu
    double base_kv = 0.0;
    double vm0 = 1.0;     // pu
    double va0 = 0.0;     // rad
    double vmin = 0.9;
    double vmax = 1.1;
};

struct Branch {
    int from = 0;
    int to = 0;
    double r = 0.0;       // pu
    double x = 0.0;       // pu
    double b = 0.0;       // pu total charging
    double tap = 1.0;     // off-nominal ratio, 1.0 if none
    double shift = 0.0;   // rad
    double rate_a = 0.0;  // MVA, 0 = unlimited
    bool on = true;
};

struct Generator {
    int bus = 0;
    double Pg = 0.0;      // MW
    double Qg = 0.0;      // Mvar
    double Qmin = 0.0;    // Mvar
    double Qmax = 0.0;    // Mvar
    double Vset = 1.0;    // pu
    bool on = true;
};

class NetworkCase {
  public:
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> generators;

    // position of a bus id in `buses`; throws SemanticError on unknown ids
    int index_of(int bus_id) const;
    bool has_bus(int bus_id) const { return index_.count(bus_id) != 0; }
    int slack_index() const;

    // checks all case invariants, builds the id index; throws SemanticError
    void finalize();

  private:
    std::unordered_map<int, int> index_;
};

// Case input. Accepts the MATPOWER mpc text subset (baseMVA/bus/gen/branch
// matrices, unknown fields ignored) or the JSON case schema; the format is
// auto-detected.
NetworkCase parse_case(const std::string& text);
NetworkCase load_case(const std::string& path);

// JSON case schema emitter; parse_case(case_to_json(c)) round-trips.
std::string case_to_json(const NetworkCase& c);

using AdmittanceMatrix = Eigen::SparseMatrix<std::complex<double>>;

// Per-branch two-port admittances of the pi model with tap and shift.
struct BranchAdmittance {
    std::complex<double> yff, yft, ytf, ytt;
};

BranchAdmittance branch_admittance(const Branch& br);
AdmittanceMatrix build_admittance(const NetworkCase& c);

} // namespace ppflow
