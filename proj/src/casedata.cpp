#include "ppflow/casedata.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace ppflow {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

struct MpcMatrix {
    std::vector<std::vector<double>> rows;
};

// Extracts `mpc.<name> = [ rows ];` allowing comments and arbitrary
// whitespace. Rows are ';'-terminated.
class MpcScanner {
  public:
    explicit MpcScanner(const std::string& text) : text_(text) {}

    bool find(const std::string& key, std::size_t& pos) const {
        pos = text_.find("mpc." + key, 0);
        while (pos != std::string::npos) {
            std::size_t after = pos + 4 + key.size();
            // require a non-identifier character next ("bus" vs "buses")
            if (after >= text_.size() || (!std::isalnum(static_cast<unsigned char>(text_[after])) && text_[after] != '_'))
                return true;
            pos = text_.find("mpc." + key, pos + 1);
        }
        return false;
    }

    double scalar(const std::string& key) const {
        std::size_t pos;
        if (!find(key, pos)) throw ParseError("mpc." + key + " not found");
        std::size_t eq = text_.find('=', pos);
        if (eq == std::string::npos) throw ParseError("mpc." + key + ": missing '='");
        std::size_t end = text_.find(';', eq);
        try {
            return std::stod(text_.substr(eq + 1, end - eq - 1));
        } catch (const std::exception&) {
            throw ParseError("mpc." + key + ": not a number at offset " + std::to_string(eq + 1));
        }
    }

    MpcMatrix matrix(const std::string& key) const {
        std::size_t pos;
        if (!find(key, pos)) throw ParseError("mpc." + key + " not found");
        std::size_t open = text_.find('[', pos);
        std::size_t close = text_.find(']', open);
        if (open == std::string::npos || close == std::string::npos)
            throw ParseError("mpc." + key + ": missing matrix brackets");
        MpcMatrix m;
        std::string body = text_.substr(open + 1, close - open - 1);
        std::istringstream lines(body);
        std::string line;
        int lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            auto cut = line.find('%');
            if (cut != std::string::npos) line.resize(cut);
            for (char& ch : line)
                if (ch == ';' || ch == ',') ch = ' ';
            std::istringstream fields(line);
            std::vector<double> row;
            std::string tok;
            while (fields >> tok) {
                try {
                    row.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw ParseError("mpc." + key + " row " + std::to_string(lineno) +
                                     ": bad number '" + tok + "'");
                }
            }
            if (!row.empty()) m.rows.push_back(std::move(row));
        }
        return m;
    }

  private:
    const std::string& text_;
};

double col(const std::vector<double>& row, std::size_t i, double fallback) {
    return i < row.size() ? row[i] : fallback;
}

NetworkCase parse_mpc(const std::string& text) {
    MpcScanner scan(text);
    NetworkCase c;
    c.base_mva = scan.scalar("baseMVA");

    for (const auto& row : scan.matrix("bus").rows) {
        if (row.size() < 13)
            throw ParseError("bus row with " + std::to_string(row.size()) + " columns (need 13)");
        Bus b;
        b.id = static_cast<int>(row[0]);
        int type = static_cast<int>(row[1]);
        switch (type) {
            case 1: b.kind = BusKind::PQ; break;
            case 2: b.kind = BusKind::PV; break;
            case 3: b.kind = BusKind::Slack; break;
            default:
                throw ParseError("bus " + std::to_string(b.id) + ": unsupported type " +
                                 std::to_string(type));
        }
        b.Pd = row[2];
        b.Qd = row[3];
        b.Gs = row[4];
        b.Bs = row[5];
        b.vm0 = row[7];
        b.va0 = row[8] * kDegToRad;
        b.base_kv = row[9];
        b.vmax = row[11];
        b.vmin = row[12];
        c.buses.push_back(b);
    }
    for (const auto& row : scan.matrix("gen").rows) {
        if (row.size() < 8) throw ParseError("gen row with fewer than 8 columns");
        Generator g;
        g.bus = static_cast<int>(row[0]);
        g.Pg = row[1];
        g.Qg = row[2];
        g.Qmax = row[3];
        g.Qmin = row[4];
        g.Vset = row[5];
        g.on = row[7] > 0.0;
        c.generators.push_back(g);
    }
    for (const auto& row : scan.matrix("branch").rows) {
        if (row.size() < 11) throw ParseError("branch row with fewer than 11 columns");
        Branch br;
        br.from = static_cast<int>(row[0]);
        br.to = static_cast<int>(row[1]);
        br.r = row[2];
        br.x = row[3];
        br.b = row[4];
        br.rate_a = row[5];
        br.tap = row[8] == 0.0 ? 1.0 : row[8];
        br.shift = row[9] * kDegToRad;
        br.on = row[10] > 0.0;
        c.branches.push_back(br);
    }
    c.finalize();
    return c;
}

NetworkCase parse_json_case(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("json case: ") + e.what());
    }
    NetworkCase c;
    try {
        c.base_mva = j.at("base_mva").get<double>();
        for (const auto& jb : j.at("buses")) {
            Bus b;
            b.id = jb.at("id").get<int>();
            std::string kind = jb.at("kind").get<std::string>();
            if (kind == "slack")
                b.kind = BusKind::Slack;
            else if (kind == "pv")
                b.kind = BusKind::PV;
            else if (kind == "pq")
                b.kind = BusKind::PQ;
            else
                throw ParseError("bus " + std::to_string(b.id) + ": unknown kind '" + kind + "'");
            b.Pd = jb.value("Pd", 0.0);
            b.Qd = jb.value("Qd", 0.0);
            b.Gs = jb.value("Gs", 0.0);
            b.Bs = jb.value("Bs", 0.0);
            b.base_kv = jb.value("base_kv", 0.0);
            b.vm0 = jb.value("vm0", 1.0);
            b.va0 = jb.value("va0_deg", 0.0) * kDegToRad;
            b.vmin = jb.value("vmin", 0.9);
            b.vmax = jb.value("vmax", 1.1);
            c.buses.push_back(b);
        }
        for (const auto& jb : j.at("branches")) {
            Branch br;
            br.from = jb.at("from").get<int>();
            br.to = jb.at("to").get<int>();
            br.r = jb.value("r", 0.0);
            br.x = jb.at("x").get<double>();
            br.b = jb.value("b", 0.0);
            br.tap = jb.value("tap", 1.0);
            if (br.tap == 0.0) br.tap = 1.0;
            br.shift = jb.value("shift_deg", 0.0) * kDegToRad;
            br.rate_a = jb.value("rate_a", 0.0);
            br.on = jb.value("status", 1) > 0;
            c.branches.push_back(br);
        }
        for (const auto& jg : j.at("generators")) {
            Generator g;
            g.bus = jg.at("bus").get<int>();
            g.Pg = jg.value("Pg", 0.0);
            g.Qg = jg.value("Qg", 0.0);
            g.Qmin = jg.value("Qmin", 0.0);
            g.Qmax = jg.value("Qmax", 0.0);
            g.Vset = jg.value("Vset", 1.0);
            g.on = jg.value("status", 1) > 0;
            c.generators.push_back(g);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json case: ") + e.what());
    }
    c.finalize();
    return c;
}

} // namespace

int NetworkCase::index_of(int bus_id) const {
    auto it = index_.find(bus_id);
    if (it == index_.end())
        throw SemanticError("unknown bus id " + std::to_string(bus_id));
    return it->second;
}

int NetworkCase::slack_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].kind == BusKind::Slack) return static_cast<int>(i);
    throw SemanticError("no slack bus");
}

void NetworkCase::finalize() {
    index_.clear();
    if (buses.empty()) throw SemanticError("case has no buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (!index_.emplace(buses[i].id, static_cast<int>(i)).second)
            throw SemanticError("duplicate bus id " + std::to_string(buses[i].id));
    }
    std::vector<int> slacks;
    for (const auto& b : buses) {
        if (b.kind == BusKind::Slack) slacks.push_back(b.id);
        if (b.vmin > b.vmax)
            throw SemanticError("bus " + std::to_string(b.id) + ": Vmin > Vmax");
        if (b.vm0 <= 0.0)
            throw SemanticError("bus " + std::to_string(b.id) + ": Vm0 <= 0");
    }
    if (slacks.empty()) throw SemanticError("no slack bus");
    if (slacks.size() > 1) {
        std::string msg = "multiple slack buses:";
        for (int id : slacks) msg += " " + std::to_string(id);
        throw SemanticError(msg);
    }
    for (const auto& br : branches) {
        if (br.from == br.to)
            throw SemanticError("branch " + std::to_string(br.from) + "-" +
                                std::to_string(br.to) + ": from == to");
        if (br.on && br.x == 0.0)
            throw SemanticError("branch " + std::to_string(br.from) + "-" +
                                std::to_string(br.to) + ": zero reactance");
        if (br.tap <= 0.0)
            throw SemanticError("branch " + std::to_string(br.from) + "-" +
                                std::to_string(br.to) + ": tap <= 0");
        index_of(br.from);
        index_of(br.to);
    }
    std::vector<bool> has_gen(buses.size(), false);
    for (const auto& g : generators) {
        if (g.Qmin > g.Qmax)
            throw SemanticError("generator at bus " + std::to_string(g.bus) + ": Qmin > Qmax");
        if (g.on) has_gen[index_of(g.bus)] = true;
    }
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].kind == BusKind::PV && !has_gen[i])
            throw SemanticError("PV bus " + std::to_string(buses[i].id) +
                                " has no in-service generator");
    }
    // connectivity over in-service branches
    std::vector<std::vector<int>> adj(buses.size());
    for (const auto& br : branches) {
        if (!br.on) continue;
        int f = index_of(br.from), t = index_of(br.to);
        adj[f].push_back(t);
        adj[t].push_back(f);
    }
    std::vector<bool> seen(buses.size(), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                q.push(v);
            }
    }
    std::string unreachable;
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (!seen[i]) unreachable += " " + std::to_string(buses[i].id);
    if (!unreachable.empty())
        throw SemanticError("disconnected buses:" + unreachable);
}

NetworkCase parse_case(const std::string& text) {
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch == '{') return parse_json_case(text);
        break;
    }
    return parse_mpc(text);
}

NetworkCase load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open case file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_case(ss.str());
}

std::string case_to_json(const NetworkCase& c) {
    nlohmann::json j;
    j["base_mva"] = c.base_mva;
    for (const auto& b : c.buses) {
        const char* kind = b.kind == BusKind::Slack ? "slack" : (b.kind == BusKind::PV ? "pv" : "pq");
        j["buses"].push_back({{"id", b.id},
                              {"kind", kind},
                              {"Pd", b.Pd},
                              {"Qd", b.Qd},
                              {"Gs", b.Gs},
                              {"Bs", b.Bs},
                              {"base_kv", b.base_kv},
                              {"vm0", b.vm0},
                              {"va0_deg", b.va0 / kDegToRad},
                              {"vmin", b.vmin},
                              {"vmax", b.vmax}});
    }
    for (const auto& br : c.branches)
        j["branches"].push_back({{"from", br.from},
                                 {"to", br.to},
                                 {"r", br.r},
                                 {"x", br.x},
                                 {"b", br.b},
                                 {"tap", br.tap},
                                 {"shift_deg", br.shift / kDegToRad},
                                 {"rate_a", br.rate_a},
                                 {"status", br.on ? 1 : 0}});
    for (const auto& g : c.generators)
        j["generators"].push_back({{"bus", g.bus},
                                   {"Pg", g.Pg},
                                   {"Qg", g.Qg},
                                   {"Qmin", g.Qmin},
                                   {"Qmax", g.Qmax},
                                   {"Vset", g.Vset},
                                   {"status", g.on ? 1 : 0}});
    return j.dump(1);
}

BranchAdmittance branch_admittance(const Branch& br) {
    std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
    std::complex<double> ytt = ys + std::complex<double>(0.0, 0.5 * br.b);
    std::complex<double> tap = std::polar(br.tap, br.shift);
    BranchAdmittance a;
    a.ytt = ytt;
    a.yff = ytt / (br.tap * br.tap);
    a.yft = -ys / std::conj(tap);
    a.ytf = -ys / tap;
    return a;
}

AdmittanceMatrix build_admittance(const NetworkCase& c) {
    const int n = static_cast<int>(c.buses.size());
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    trips.reserve(4 * c.branches.size() + c.buses.size());
    for (const auto& br : c.branches) {
        if (!br.on) continue;
        int f = c.index_of(br.from), t = c.index_of(br.to);
        BranchAdmittance a = branch_admittance(br);
        trips.emplace_back(f, f, a.yff);
        trips.emplace_back(f, t, a.yft);
        trips.emplace_back(t, f, a.ytf);
        trips.emplace_back(t, t, a.ytt);
    }
    for (int i = 0; i < n; ++i)
        trips.emplace_back(i, i, std::complex<double>(c.buses[i].Gs, c.buses[i].Bs) / c.base_mva);
    AdmittanceMatrix Y(n, n);
    Y.setFromTriplets(trips.begin(), trips.end());
    Y.makeCompressed();
    return Y;
}

} // namespace ppflow
