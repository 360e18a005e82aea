// glc-lab: command-line front end over the exact lattice laboratory.
//
// Subcommands: scan, orbit, nf, dim, entropy, verify. Every run writes its
// outputs plus a manifest (command, config snapshot, input hashes, seed) into
// --out-dir; certified outputs are byte-deterministic at any worker count.
//
// Exit codes: 0 success, 2 input/schema error, 3 mathematical precondition
// unmet, 4 precision exhaustion.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glc/diagonal.hpp"
#include "glc/estimators.hpp"
#include "glc/numberfield.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace glc;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- plumbing

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream oss;
    for (unsigned int i = 0; i < len; ++i)
        oss << std::hex << std::setw(2) << std::setfill('0') << (int)md[i];
    return oss.str();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw SchemaError("cannot read file: " + p.string());
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

struct RunContext {
    std::string command;
    fs::path config_path;
    fs::path out_dir = ".";
    int workers = 1;
    std::uint64_t seed = 0;
    int precision_floor_bits = 256;
    json config;
    std::string config_hash;
    json outputs = json::array();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void load_config() {
        std::string raw = read_file(config_path);
        config_hash = sha256_hex(raw);
        try {
            config = json::parse(raw);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("config is not valid JSON: ") + e.what());
        }
    }

    void write_output(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        std::ofstream out(out_dir / name, std::ios::binary);
        out << content;
        out.close();
        outputs.push_back({{"name", name}, {"sha256", sha256_hex(content)}});
    }

    void write_manifest() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        json m;
        m["command"] = command;
        m["tool_version"] = kToolVersion;
        m["config"] = config;
        m["input_hashes"] = {{config_path.string(), config_hash}};
        m["outputs"] = outputs;
        m["seed"] = seed;
        m["workers"] = workers;
        m["precision_floor_bits"] = precision_floor_bits;
        m["wall_time_ms"] = ms;
        fs::create_directories(out_dir);
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << m.dump(2) << "\n";
    }
};

template <class F>
void parallel_for(long n, int workers, F&& f) {
    workers = std::max(workers, 1);
    if (workers == 1 || n <= 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    std::mutex err_mx;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// ------------------------------------------------------------- json schema

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
}

void check_keys(const json& j, const std::vector<std::string>& required,
                const std::vector<std::string>& optional, const std::string& where) {
    require_object(j, where);
    for (const auto& k : required)
        if (!j.contains(k)) throw SchemaError(where + ": missing key '" + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                     std::find(optional.begin(), optional.end(), k) != optional.end();
        if (!known) throw SchemaError(where + ": unknown key '" + k + "'");
    }
}

void check_schema_version(const json& cfg) {
    if (!cfg.contains("schema_version") || !cfg["schema_version"].is_number_integer() ||
        cfg["schema_version"].get<int>() != kSchemaVersion)
        throw SchemaError("config: schema_version must be the integer " +
                          std::to_string(kSchemaVersion));
}

Rat jrat(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rat((long)j.get<std::int64_t>());
        if (j.is_string()) return Rat::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SchemaError(where + ": " + e.what());
    }
    throw SchemaError(where + ": expected a rational as integer or \"p/q\" string");
}

long jlong(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return (long)j.get<std::int64_t>();
}

double jdouble(const json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    return j.get<double>();
}

RatMat jmat(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty matrix");
    int rows = (int)j.size();
    int cols = (int)j[0].size();
    RatMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || (int)j[i].size() != cols)
            throw SchemaError(where + ": ragged matrix rows");
        for (int c = 0; c < cols; ++c)
            m(i, c) = jrat(j[i][c], where + "[" + std::to_string(i) + "]");
    }
    return m;
}

std::vector<Rat> jratvec(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array");
    std::vector<Rat> v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(jrat(j[i], where));
    return v;
}

// --------------------------------------------------- lattice/grid (de)serde

Lattice lattice_from_json(const json& j, const std::string& where) {
    check_keys(j, {"dim", "basis"}, {"scale", "translation", "id"}, where);
    int d = (int)jlong(j.at("dim"), where + ".dim");
    RatMat b = jmat(j.at("basis"), where + ".basis");
    if (b.rows() != d || b.cols() != d)
        throw SchemaError(where + ": basis must be " + std::to_string(d) + "x" +
                          std::to_string(d));
    Lattice x = Lattice::from_rational(b);
    if (j.contains("scale")) {
        check_keys(j["scale"], {"covolume"}, {}, where + ".scale");
        Rat c = jrat(j["scale"]["covolume"], where + ".scale.covolume");
        if (det(b).abs() != c)
            throw SchemaError(where + ": declared covolume does not match the basis");
    }
    return x;
}

Grid grid_from_json(const json& j, const std::string& where) {
    Lattice x = lattice_from_json(j, where);
    ScalarVec coords(x.dim(), Scalar(Rat(0)));
    if (j.contains("translation")) {
        std::vector<Rat> t = jratvec(j["translation"], where + ".translation");
        if ((int)t.size() != x.dim())
            throw SchemaError(where + ".translation: dimension mismatch");
        for (int i = 0; i < x.dim(); ++i) coords[i] = Scalar(t[i]);
    }
    return Grid(std::move(x), std::move(coords));
}

json grid_to_json(const Grid& y) {
    json j;
    j["dim"] = y.lattice().dim();
    RatMat b = y.lattice().rational_basis();
    json basis = json::array();
    for (int i = 0; i < b.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < b.cols(); ++c) row.push_back(b(i, c).str());
        basis.push_back(row);
    }
    j["basis"] = basis;
    j["scale"] = {{"covolume", det(b).abs().str()}};
    json tr = json::array();
    for (const Rat& c : y.coords_as_rats()) tr.push_back(c.str());
    j["translation"] = tr;
    return j;
}

json product_value_to_json(const ProductValue& pv) {
    json j;
    j["exact"] = pv.exact ? json(pv.exact->str()) : json(nullptr);
    j["lo"] = pv.box.lo().str();
    j["hi"] = pv.box.hi().str();
    return j;
}

json intmat_to_json(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c).get_str());
        rows.push_back(row);
    }
    return rows;
}

IntMat intmat_from_json(const json& j, const std::string& where) {
    RatMat m = jmat(j, where);
    if (!is_integer_matrix(m)) throw SchemaError(where + ": expected an integer matrix");
    return to_integer_matrix(m);
}

std::string fmt_double(double v) {
    std::ostringstream oss;
    oss << std::setprecision(17) << v;
    return oss.str();
}

// --------------------------------------------------------------- commands

int cmd_scan(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_schema_version(cfg);
    check_keys(cfg, {"schema_version", "radius", "n_max", "grids"}, {}, "config");
    Rat R = jrat(cfg["radius"], "config.radius");
    long n_max = jlong(cfg["n_max"], "config.n_max");
    if (!cfg["grids"].is_array() || cfg["grids"].empty())
        throw SchemaError("config.grids: expected a nonempty array");
    long n = (long)cfg["grids"].size();
    std::vector<Grid> grids((size_t)n);
    std::vector<std::string> ids((size_t)n);
    for (long i = 0; i < n; ++i) {
        std::string where = "config.grids[" + std::to_string(i) + "]";
        grids[(size_t)i] = grid_from_json(cfg["grids"][(size_t)i], where);
        ids[(size_t)i] = cfg["grids"][(size_t)i].value("id", "grid" + std::to_string(i));
    }

    std::vector<json> records((size_t)n);
    std::vector<std::string> csv_rows((size_t)n);
    std::atomic<bool> precision_fail{false};
    Rat floor = Rat::pow(Rat(2), -ctx.precision_floor_bits);
    parallel_for(n, ctx.workers, [&](long i) {
        auto [pv, rec] = littlewood_witness_search(grids[(size_t)i], R, Int(n_max));
        json w;
        w["kind"] = "witness";
        w["grid_id"] = ids[(size_t)i];
        w["grid"] = grid_to_json(grids[(size_t)i]);
        json coeffs = json::array();
        for (const Int& c : rec.coeffs) coeffs.push_back(c.get_str());
        w["coeffs"] = coeffs;
        w["n"] = rec.n.get_str();
        w["bound"] = product_value_to_json(pv);
        w["region_radius"] = R.str();
        w["n_max"] = std::to_string(n_max);
        w["config_hash"] = ctx.config_hash;
        records[(size_t)i] = w;
        csv_rows[(size_t)i] = ids[(size_t)i] + "," + rec.n.get_str() + "," + pv.box.lo().str() +
                              "," + pv.box.hi().str() + "," +
                              (pv.exact ? pv.exact->str() : "");
        if (!pv.exact && pv.box.width() > floor) precision_fail = true;
    });

    json out = json::array();
    for (auto& r : records) out.push_back(std::move(r));
    ctx.write_output("witnesses.json", out.dump(2) + "\n");
    std::string csv = "grid_id,n,bound_lo,bound_hi,bound_exact\n";
    for (const auto& row : csv_rows) csv += row + "\n";
    ctx.write_output("scan.csv", csv);
    if (precision_fail) throw PrecisionError("scan: a bound enclosure stalled above the floor");
    return 0;
}

int cmd_orbit(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_schema_version(cfg);
    check_keys(cfg, {"schema_version", "grid", "ray", "steps"}, {"base", "eps"}, "config");
    Grid y = grid_from_json(cfg["grid"], "config.grid");
    std::vector<Rat> ray = jratvec(cfg["ray"], "config.ray");
    long steps = jlong(cfg["steps"], "config.steps");
    Rat base = cfg.contains("base") ? jrat(cfg["base"], "config.base") : Rat(2);

    Trajectory traj = cone_ray_flow(y, ray, steps, base);

    std::vector<WitnessRecord> recs;
    std::vector<long> witness_of_sample(traj.samples.size(), -1);
    if (cfg.contains("eps")) {
        Rat eps = jrat(cfg["eps"], "config.eps");
        recs = unboundedness_report(traj, eps);
        long next = 0;
        for (size_t k = 0; k < traj.samples.size(); ++k)
            if (traj.samples[k].precision_ok && traj.samples[k].systole.hi() < eps &&
                next < (long)recs.size())
                witness_of_sample[k] = next++;
    }

    std::string csv = "t,systole_lo,systole_hi,witness_bound,witness_json_ref\n";
    bool precision_fail = false;
    for (size_t k = 0; k < traj.samples.size(); ++k) {
        const TrajectorySample& s = traj.samples[k];
        if (!s.precision_ok) {
            precision_fail = true;
            csv += s.time.get_str() + ",,,,\n";
            continue;
        }
        csv += s.time.get_str() + "," + s.systole.lo().str() + "," + s.systole.hi().str() + ",";
        long w = witness_of_sample[k];
        if (w >= 0)
            csv += recs[(size_t)w].bound.upper_abs().str() + ",witnesses.json#" +
                   std::to_string(w);
        else
            csv += ",";
        csv += "\n";
    }
    ctx.write_output("trajectory.csv", csv);

    // serialize in slice form w = B(m + n v), n = last tau coordinate, so a
    // standalone verify can recompute the product against the original grid
    json wout = json::array();
    for (const WitnessRecord& rec : recs) {
        json w;
        w["kind"] = "witness";
        w["grid_id"] = "orbit";
        w["grid"] = grid_to_json(y);
        // shift the lattice part into the reduced-translation convention of
        // scale_grid, which the standalone verifier recomputes against
        std::vector<Rat> v = y.coords_as_rats();
        std::vector<Rat> nc = scale_grid(y, rec.n).coords_as_rats();
        int d = y.lattice().dim();
        std::vector<Rat> vec(d);
        json coeffs = json::array();
        for (int i = 0; i < d; ++i) {
            Int m = rec.coeffs[(size_t)i] + (Rat(rec.n) * v[(size_t)i] - nc[(size_t)i]).num();
            coeffs.push_back(m.get_str());
            vec[(size_t)i] = Rat(m) + nc[(size_t)i];
        }
        w["coeffs"] = coeffs;
        w["n"] = rec.n.get_str();
        w["n_max"] = rec.n.get_str();
        // honest enclosing radius: the sup norm of the witness itself
        RatMat B = y.lattice().rational_basis();
        std::vector<Rat> wv = B * vec;
        Rat radius(rec.n);
        for (const Rat& x : wv) radius = std::max(radius, x.abs());
        w["region_radius"] = radius.str();
        w["bound"] = product_value_to_json(rec.bound);
        w["config_hash"] = ctx.config_hash;
        wout.push_back(std::move(w));
    }
    ctx.write_output("witnesses.json", wout.dump(2) + "\n");
    if (precision_fail)
        throw PrecisionError("orbit: a systole enclosure could not be certified");
    return 0;
}

const char* status_str(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "unknown";
    }
}

json unit_to_json(const UnitRecord& u, const json& field_json, const json& lattice_json) {
    json j;
    j["kind"] = "unit";
    j["field"] = field_json;
    j["lattice"] = lattice_json;
    json omega = json::array();
    for (int i = 0; i <= u.omega.degree(); ++i) omega.push_back(u.omega.coeff(i).str());
    j["omega"] = omega;
    j["norm"] = u.norm.str();
    j["stabilizer"] = intmat_to_json(u.stabilizer);
    j["totally_positive"] = u.totally_positive;
    return j;
}

int cmd_nf(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_schema_version(cfg);
    check_keys(cfg, {"schema_version", "field"},
               {"lattice", "unit_height", "thetas", "fl_denominator", "id_units"}, "config");
    check_keys(cfg["field"], {"poly"}, {}, "config.field");
    std::vector<Rat> pc = jratvec(cfg["field"]["poly"], "config.field.poly");
    std::vector<Int> ic;
    for (const Rat& c : pc) {
        if (!c.is_integer()) throw SchemaError("config.field.poly: coefficients must be integers");
        ic.push_back(c.num());
    }
    FieldPtr K = NumberField::create(IntPoly(std::move(ic)));
    int d = K->degree();

    json report;
    report["field"] = {{"poly", cfg["field"]["poly"]},
                       {"degree", d},
                       {"real_embeddings", K->real_embeddings()},
                       {"totally_real", K->totally_real()}};
    if (!K->totally_real()) {
        report["error"] =
            "field is not totally real; the unit/lattice constructions are refused";
        ctx.write_output("report.json", report.dump(2) + "\n");
        throw std::domain_error("nf: field must be totally real for the lattice constructions");
    }

    RatMat coords = cfg.contains("lattice") ? jmat(cfg["lattice"], "config.lattice")
                                            : RatMat::identity(d);
    KLattice lam(K, coords);
    json lattice_json = json::array();
    for (int i = 0; i < d; ++i) {
        json row = json::array();
        for (int c = 0; c < d; ++c) row.push_back(coords(i, c).str());
        lattice_json.push_back(row);
    }
    report["lattice"] = lattice_json;

    OrderData ord = order_of(lam);
    json ord_json;
    ord_json["contains_one"] = ord.contains_one;
    ord_json["multiplicatively_closed"] = ord.multiplicatively_closed;
    json ord_basis = json::array();
    for (int i = 0; i < d; ++i) {
        json row = json::array();
        for (int c = 0; c < d; ++c) row.push_back(ord.order.coords(i, c).str());
        ord_basis.push_back(row);
    }
    ord_json["basis"] = ord_basis;
    report["order"] = ord_json;

    long height = cfg.contains("unit_height") ? jlong(cfg["unit_height"], "config.unit_height") : 3;
    std::vector<UnitRecord> units = find_units(lam, height);
    json units_json = json::array();
    for (const UnitRecord& u : units)
        units_json.push_back(unit_to_json(u, cfg["field"], lattice_json));
    report["units"] = units_json;
    report["unit_height"] = height;
    int rank = unit_log_rank_lower_bound(units, K);
    report["log_rank_lower_bound"] = rank;
    report["log_rank_upper_bound"] = d - 1;

    // family for the isolation conditions: explicit id_units when given,
    // otherwise the irrational totally positive units found together with
    // squares of the others (squares are totally positive); rational units
    // always fail condition (1), so they are left out of the default family
    std::vector<UnitRecord> tp;
    std::set<std::string> seen;
    auto push_tp = [&](const UnitRecord& u) {
        if (!u.is_unit || !u.totally_positive || u.omega.degree() < 1) return;
        std::string key;
        for (int i = 0; i < d; ++i) key += u.omega.coeff(i).str() + ";";
        if (seen.insert(key).second) tp.push_back(u);
    };
    if (cfg.contains("id_units")) {
        for (size_t t = 0; t < cfg["id_units"].size(); ++t) {
            std::vector<Rat> oc =
                jratvec(cfg["id_units"][t], "config.id_units[" + std::to_string(t) + "]");
            UnitRecord u = verify_unit(FieldElement(oc), lam);
            if (!u.is_unit)
                throw std::domain_error("nf: id_units entry is not a unit: " + u.failure);
            std::string key;
            for (int i = 0; i < d; ++i) key += u.omega.coeff(i).str() + ";";
            if (seen.insert(key).second) tp.push_back(std::move(u));
        }
    } else {
        for (const UnitRecord& u : units) {
            push_tp(u);
            if (!u.totally_positive) push_tp(verify_unit(K->mul(u.omega, u.omega), lam));
        }
    }
    IdConditionsReport id = id_conditions_check(tp, K);
    json id_json;
    id_json["cond1_embeddings_distinct_up_to_sign"] = status_str(id.cond1);
    id_json["cond2_no_embedding_equals_one"] = status_str(id.cond2);
    id_json["cond3_pairwise_multiplicative_independence"] = status_str(id.cond3);
    if (!id.detail.empty()) id_json["detail"] = id.detail;
    json tp_json = json::array();
    for (const UnitRecord& u : tp) tp_json.push_back(unit_to_json(u, cfg["field"], lattice_json));
    report["id_condition_units"] = tp_json;
    report["id_conditions"] = id_json;

    bool conds = id.cond1 == CheckStatus::Pass && id.cond2 == CheckStatus::Pass &&
                 id.cond3 == CheckStatus::Pass;
    if (d < 3) {
        report["gfl_claim"] = false;
        report["gfl_note"] =
            "degree >= 3 is required for the isolation machinery; claim suppressed";
    } else {
        report["gfl_claim"] = conds;
        if (!conds) report["gfl_note"] = "isolation conditions not certified";
    }

    Lattice x = build_lattice(lam);
    json xj;
    xj["dim"] = d;
    xj["normalized"] = true;
    xj["covolume_sq"] = x.covol_sq()->str();
    Interval cert = x.covolume_certificate();
    xj["covolume_certificate"] = {{"lo", cert.lo().str()}, {"hi", cert.hi().str()}};
    json xb = json::array();
    Matrix<Interval> ib = x.interval_basis(Rat(1, 1 << 24));
    for (int i = 0; i < d; ++i) {
        json row = json::array();
        for (int c = 0; c < d; ++c)
            row.push_back(json{{"lo", ib(i, c).lo().str()}, {"hi", ib(i, c).hi().str()}});
        xb.push_back(row);
    }
    xj["basis_intervals"] = xb;
    report["x_lambda"] = xj;

    // fixed grids: first totally positive unit different from 1 acts
    if (cfg.contains("thetas")) {
        const UnitRecord* omega = nullptr;
        for (const UnitRecord& u : tp)
            if (!(u.omega == FieldElement(Rat(1)))) {
                omega = &u;
                break;
            }
        if (!omega) throw std::domain_error("nf: no totally positive unit != 1 found");
        json fixed = json::array();
        for (size_t t = 0; t < cfg["thetas"].size(); ++t) {
            std::vector<Rat> tc =
                jratvec(cfg["thetas"][t], "config.thetas[" + std::to_string(t) + "]");
            if ((int)tc.size() != d) throw SchemaError("config.thetas: wrong dimension");
            FieldElement theta(tc);
            Grid y = fixed_grid_solve(*omega, theta, lam);
            FLCertificate fl = rational_grid_fl_certificate(y, /*number_field_lattice=*/true);
            json fj;
            fj["theta"] = cfg["thetas"][t];
            json oc = json::array();
            for (int i = 0; i < d; ++i) oc.push_back(omega->omega.coeff(i).str());
            fj["omega"] = oc;
            json tr = json::array();
            for (const Rat& c : y.coords_as_rats()) tr.push_back(c.str());
            fj["translation"] = tr;
            fj["fl"] = {{"kind", "fl"},
                        {"n", fl.n.get_str()},
                        {"minimal_claimed", fl.minimal_claimed},
                        {"translation", tr}};
            fixed.push_back(std::move(fj));
        }
        report["fixed_grids"] = fixed;
    }

    ctx.write_output("report.json", report.dump(2) + "\n");
    ctx.write_output("units.json", units_json.dump(2) + "\n");

    // FL certificate family over the (1/D)-rational classes of the fiber torus
    if (cfg.contains("fl_denominator")) {
        long D = jlong(cfg["fl_denominator"], "config.fl_denominator");
        if (D < 1) throw SchemaError("config.fl_denominator: must be >= 1");
        long total = 1;
        for (int i = 0; i < d; ++i) total *= D;
        std::vector<json> certs((size_t)total);
        parallel_for(total, ctx.workers, [&](long i) {
            long rem = i;
            ScalarVec coords_v;
            json tr = json::array();
            for (int c = 0; c < d; ++c) {
                Rat q(rem % D, D);
                rem /= D;
                coords_v.emplace_back(q);
                tr.push_back(q.str());
            }
            Grid y(x, std::move(coords_v));
            FLCertificate fl = rational_grid_fl_certificate(y, true);
            certs[(size_t)i] = json{{"kind", "fl"},
                                    {"n", fl.n.get_str()},
                                    {"minimal_claimed", fl.minimal_claimed},
                                    {"translation", tr}};
        });
        json out = json::array();
        for (auto& c : certs) out.push_back(std::move(c));
        ctx.write_output("fl_certificates.json", out.dump(2) + "\n");
    }
    return 0;
}

PointCloud cloud_from_json(const json& j, const RunContext& ctx, const std::string& where) {
    require_object(j, where);
    if (!j.contains("kind")) throw SchemaError(where + ": missing key 'kind'");
    std::string kind = j["kind"].get<std::string>();
    PointCloud cloud;
    auto metric_by_name = [&](const std::string& name) -> DistanceFn {
        if (name == "euclidean")
            return [](const EstPoint& a, const EstPoint& b) {
                double s = 0;
                for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
                return std::sqrt(s);
            };
        if (name == "sup")
            return [](const EstPoint& a, const EstPoint& b) {
                double m = 0;
                for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
                return m;
            };
        if (name == "torus_sup") return torus_sup_distance;
        throw SchemaError(where + ": unknown metric '" + name + "'");
    };
    if (kind == "points") {
        check_keys(j, {"kind", "points"}, {"metric"}, where);
        for (const auto& p : j["points"]) {
            EstPoint pt;
            for (const auto& c : p) pt.push_back(jdouble(c, where + ".points"));
            cloud.points.push_back(std::move(pt));
        }
        cloud.distance = metric_by_name(j.value("metric", "euclidean"));
    } else if (kind == "cantor") {
        check_keys(j, {"kind", "depth"}, {}, where);
        long depth = jlong(j["depth"], where + ".depth");
        if (depth < 1 || depth > 20) throw SchemaError(where + ".depth: expected 1..20");
        for (long mask = 0; mask < (1L << depth); ++mask) {
            double x = 0;
            for (long i = 0; i < depth; ++i)
                if (mask & (1L << i)) x += 2.0 * std::pow(3.0, -(double)(i + 1));
            cloud.points.push_back({x});
        }
        cloud.distance = metric_by_name("euclidean");
    } else if (kind == "square_grid") {
        check_keys(j, {"kind", "resolution"}, {}, where);
        long res = jlong(j["resolution"], where + ".resolution");
        if (res < 2 || res > 1024) throw SchemaError(where + ".resolution: expected 2..1024");
        for (long i = 0; i < res; ++i)
            for (long k = 0; k < res; ++k)
                cloud.points.push_back({(double)i / (double)res, (double)k / (double)res});
        cloud.distance = metric_by_name("sup");
    } else if (kind == "uniform_random") {
        check_keys(j, {"kind", "count", "dim"}, {"metric"}, where);
        long count = jlong(j["count"], where + ".count");
        long dim = jlong(j["dim"], where + ".dim");
        std::mt19937_64 gen(ctx.seed);
        std::uniform_real_distribution<double> u(0, 1);
        for (long i = 0; i < count; ++i) {
            EstPoint pt;
            for (long c = 0; c < dim; ++c) pt.push_back(u(gen));
            cloud.points.push_back(std::move(pt));
        }
        cloud.distance = metric_by_name(j.value("metric", "euclidean"));
    } else if (kind == "sampler") {
        check_keys(j, {"kind", "lattice", "resolution", "radius", "n_max", "threshold"}, {},
                   where);
        Lattice x = lattice_from_json(j["lattice"], where + ".lattice");
        cloud = exception_sampler(x, jlong(j["resolution"], where + ".resolution"),
                                  jrat(j["radius"], where + ".radius"),
                                  Int(jlong(j["n_max"], where + ".n_max")),
                                  jrat(j["threshold"], where + ".threshold"));
    } else {
        throw SchemaError(where + ": unknown cloud kind '" + kind + "'");
    }
    return cloud;
}

int cmd_dim(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_schema_version(cfg);
    check_keys(cfg, {"schema_version", "cloud", "eps_list"},
               {"drop_large_frac", "drop_small_frac"}, "config");
    PointCloud cloud = cloud_from_json(cfg["cloud"], ctx, "config.cloud");
    std::vector<double> eps;
    for (const auto& e : cfg["eps_list"]) eps.push_back(jdouble(e, "config.eps_list"));
    if (eps.size() < 4) throw SchemaError("config.eps_list: need at least 4 scales");
    double drop_large = cfg.contains("drop_large_frac")
                            ? jdouble(cfg["drop_large_frac"], "config.drop_large_frac")
                            : 0.25;
    double drop_small = cfg.contains("drop_small_frac")
                            ? jdouble(cfg["drop_small_frac"], "config.drop_small_frac")
                            : 0.10;

    if (cfg["cloud"]["kind"] == "sampler") {
        std::string csv = "coords,bound\n";
        for (size_t i = 0; i < cloud.points.size(); ++i) {
            std::string coords;
            for (size_t c = 0; c < cloud.points[i].size(); ++c)
                coords += (c ? ";" : "") + fmt_double(cloud.points[i][c]);
            csv += coords + "," + cloud.labels[i] + "\n";
        }
        ctx.write_output("cloud.csv", csv);
    }
    if (cloud.points.empty()) {
        json est = {{"label", "ESTIMATE"},
                    {"value", 0.0},
                    {"degenerate", true},
                    {"note", "empty cloud"}};
        ctx.write_output("estimate.json", est.dump(2) + "\n");
        ctx.write_output("curve.csv", "eps,separated,cover\n");
        return 0;
    }

    SeparationCurve curve = build_separation_curve(cloud, eps);
    std::string csv = "eps,separated,cover\n";
    for (const SeparationRow& r : curve.rows)
        csv += fmt_double(r.eps) + "," + std::to_string(r.separated) + "," +
               std::to_string(r.cover) + "\n";
    ctx.write_output("curve.csv", csv);

    DimensionEstimate est = box_dimension_estimate(curve, drop_large, drop_small);
    json out;
    out["label"] = "ESTIMATE";
    out["value"] = est.value;
    out["band"] = est.band;
    out["degenerate"] = est.degenerate;
    out["rows_used"] = est.rows_used;
    out["fit_window"] = {{"drop_large_frac", drop_large}, {"drop_small_frac", drop_small}};
    ctx.write_output("estimate.json", out.dump(2) + "\n");
    return 0;
}

int cmd_entropy(RunContext& ctx) {
    const json& cfg = ctx.config;
    check_schema_version(cfg);
    check_keys(cfg, {"schema_version", "map", "cloud", "n_max", "eps_list"}, {}, "config");
    PointCloud cloud = cloud_from_json(cfg["cloud"], ctx, "config.cloud");
    long n_max = jlong(cfg["n_max"], "config.n_max");
    std::vector<double> eps;
    for (const auto& e : cfg["eps_list"]) eps.push_back(jdouble(e, "config.eps_list"));

    const json& mj = cfg["map"];
    require_object(mj, "config.map");
    if (!mj.contains("kind")) throw SchemaError("config.map: missing key 'kind'");
    std::string kind = mj["kind"].get<std::string>();
    StepFn step;
    if (kind == "identity") {
        check_keys(mj, {"kind"}, {}, "config.map");
        step = [](const EstPoint& p) { return p; };
    } else if (kind == "doubling") {
        check_keys(mj, {"kind"}, {}, "config.map");
        step = [](const EstPoint& p) {
            EstPoint q;
            for (double x : p) {
                double y = 2 * x;
                q.push_back(y - std::floor(y));
            }
            return q;
        };
    } else if (kind == "rotation") {
        check_keys(mj, {"kind", "theta"}, {}, "config.map");
        double theta = jdouble(mj["theta"], "config.map.theta");
        step = [theta](const EstPoint& p) {
            EstPoint q;
            for (double x : p) {
                double y = x + theta;
                q.push_back(y - std::floor(y));
            }
            return q;
        };
    } else {
        throw SchemaError("config.map: unknown map kind '" + kind + "'");
    }

    auto inside = [](const EstPoint& p) {
        for (double x : p)
            if (!(x >= 0.0 && x < 1.0)) return false;
        return true;
    };
    EntropyEstimate est = entropy_estimate(step, cloud, (int)n_max, eps, inside);
    std::string csv = "eps,slope\n";
    for (const auto& [e, s] : est.per_eps) csv += fmt_double(e) + "," + fmt_double(s) + "\n";
    ctx.write_output("per_eps.csv", csv);
    json out;
    out["label"] = "ESTIMATE";
    out["value"] = est.value;
    out["eps_used"] = est.eps_used;
    out["exited_region"] = est.exited_region;
    ctx.write_output("entropy.json", out.dump(2) + "\n");
    return 0;
}

// ----------------------------------------------------------------- verify

void verify_fl(const json& j) {
    check_keys(j, {"kind", "n", "translation"}, {"minimal_claimed", "grid"}, "fl certificate");
    Rat n = jrat(j["n"], "fl.n");
    if (!n.is_integer() || n.sign() <= 0)
        throw VerifyError("fl: torsion order must be a positive integer");
    std::vector<Rat> tr = jratvec(j["translation"], "fl.translation");
    if (tr.empty()) throw VerifyError("fl: empty translation");
    Int lcm(1);
    for (const Rat& c : tr) {
        if (!(c * n).is_integer())
            throw VerifyError("fl: torsion order does not collapse the translation");
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.den().get_mpz_t());
    }
    if (j.value("minimal_claimed", false) && Rat(lcm) != n)
        throw VerifyError("fl: claimed minimal torsion order is not the coordinate lcm");
    if (j.contains("grid")) {
        Grid y = grid_from_json(j["grid"], "fl.grid");
        if (y.coords_as_rats() != tr)
            throw VerifyError("fl: grid translation does not match the certificate");
        if (!scale_grid(y, n.num()).translation_is_zero())
            throw VerifyError("fl: scaled grid does not contain the zero vector");
    }
}

void verify_witness(const json& j) {
    check_keys(j, {"kind", "grid", "coeffs", "n", "bound", "region_radius", "n_max"},
               {"grid_id", "config_hash"}, "witness");
    Grid y = grid_from_json(j["grid"], "witness.grid");
    int d = y.lattice().dim();
    std::vector<Rat> coeffs = jratvec(j["coeffs"], "witness.coeffs");
    Rat n = jrat(j["n"], "witness.n");
    Rat n_max = jrat(j["n_max"], "witness.n_max");
    Rat R = jrat(j["region_radius"], "witness.region_radius");
    for (const Rat& c : coeffs)
        if (!c.is_integer()) throw VerifyError("witness: coefficients must be integers");
    if (!n.is_integer() || n.sign() <= 0 || n > n_max)
        throw VerifyError("witness: scaling index outside 1..n_max");
    if ((int)coeffs.size() != d) throw VerifyError("witness: coefficient dimension mismatch");
    // w = B(m + n v): the claimed vector in the scaled grid n*y
    RatMat B = y.lattice().rational_basis();
    std::vector<Rat> vec(d);
    Grid ny = scale_grid(y, n.num());
    std::vector<Rat> nc = ny.coords_as_rats();
    for (int i = 0; i < d; ++i) vec[i] = coeffs[(size_t)i] + nc[(size_t)i];
    std::vector<Rat> w = B * vec;
    Rat prod = n;
    for (const Rat& x : w) {
        prod *= x;
        if (x.abs() > R) throw VerifyError("witness: vector leaves the search region");
    }
    const json& b = j["bound"];
    check_keys(b, {"exact", "lo", "hi"}, {}, "witness.bound");
    if (b["exact"].is_null()) throw VerifyError("witness: only exact bounds are re-verifiable");
    if (prod.abs() != jrat(b["exact"], "witness.bound.exact").abs())
        throw VerifyError("witness: recomputed product does not match the recorded bound");
}

void verify_unit_file(const json& j) {
    check_keys(j, {"kind", "field", "lattice", "omega", "norm", "stabilizer"},
               {"totally_positive"}, "unit");
    check_keys(j["field"], {"poly"}, {}, "unit.field");
    std::vector<Rat> pc = jratvec(j["field"]["poly"], "unit.field.poly");
    std::vector<Int> ic;
    for (const Rat& c : pc) {
        if (!c.is_integer()) throw VerifyError("unit: field polynomial must be integral");
        ic.push_back(c.num());
    }
    FieldPtr K = NumberField::create(IntPoly(std::move(ic)));
    KLattice lam(K, jmat(j["lattice"], "unit.lattice"));
    FieldElement omega(jratvec(j["omega"], "unit.omega"));
    UnitRecord rec = verify_unit(omega, lam);
    if (!rec.is_unit) throw VerifyError("unit: " + rec.failure);
    if (rec.norm != jrat(j["norm"], "unit.norm"))
        throw VerifyError("unit: recorded norm does not match the resultant");
    IntMat M = intmat_from_json(j["stabilizer"], "unit.stabilizer");
    if (!(M == rec.stabilizer))
        throw VerifyError("unit: stabilizer matrix does not match the unit action");
    if (j.contains("totally_positive") &&
        j["totally_positive"].get<bool>() != rec.totally_positive)
        throw VerifyError("unit: recorded total positivity contradicts the sign certificates");
}

void verify_stabilizer(const json& j) {
    check_keys(j, {"kind", "basis", "diag", "certificate"}, {}, "stabilizer");
    RatMat B = jmat(j["basis"], "stabilizer.basis");
    std::vector<Rat> a = jratvec(j["diag"], "stabilizer.diag");
    IntMat M = intmat_from_json(j["certificate"], "stabilizer.certificate");
    int d = B.rows();
    if ((int)a.size() != d || M.rows() != d)
        throw VerifyError("stabilizer: dimension mismatch");
    Int dm = det(M);
    if (dm != 1 && dm != -1)
        throw VerifyError("stabilizer: certificate matrix is not unimodular");
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < d; ++c) {
            Rat lhs = a[(size_t)i] * B(i, c);
            Rat rhs(0);
            for (int k = 0; k < d; ++k) rhs += B(i, k) * Rat(M(k, c));
            if (lhs != rhs)
                throw VerifyError("stabilizer: certificate does not reproduce the diagonal action");
        }
}

int cmd_verify(const fs::path& path) {
    std::string raw = read_file(path);
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("certificate file is not valid JSON: ") + e.what());
    }
    std::vector<json> items;
    if (j.is_array())
        for (const auto& it : j) items.push_back(it);
    else
        items.push_back(j);
    for (size_t i = 0; i < items.size(); ++i) {
        const json& it = items[i];
        if (!it.is_object() || !it.contains("kind"))
            throw SchemaError("certificate " + std::to_string(i) + ": missing 'kind'");
        std::string kind = it["kind"].get<std::string>();
        if (kind == "fl")
            verify_fl(it);
        else if (kind == "witness")
            verify_witness(it);
        else if (kind == "unit")
            verify_unit_file(it);
        else if (kind == "stabilizer")
            verify_stabilizer(it);
        else
            throw SchemaError("certificate " + std::to_string(i) + ": unknown kind '" + kind +
                              "'");
    }
    std::cout << "verified " << items.size() << " certificate(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic laboratory for product forms on grids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("glc-lab ") + kToolVersion);

    RunContext ctx;
    std::string verify_path;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", ctx.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out-dir", ctx.out_dir, "output directory");
        sub->add_option("--workers", ctx.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", ctx.seed, "seed for randomized estimator inputs");
        sub->add_option("--precision-floor", ctx.precision_floor_bits,
                        "precision floor exponent in bits")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* scan = app.add_subcommand("scan", "product-bound search over a grid list");
    add_common(scan, true);
    CLI::App* orbit = app.add_subcommand("orbit", "diagonal-flow trajectory with witnesses");
    add_common(orbit, true);
    CLI::App* nf = app.add_subcommand("nf", "number-field pipeline: units, conditions, grids");
    add_common(nf, true);
    CLI::App* dim = app.add_subcommand("dim", "box-dimension estimate of a point cloud");
    add_common(dim, true);
    CLI::App* entropy = app.add_subcommand("entropy", "topological-entropy estimate of a map");
    add_common(entropy, true);
    CLI::App* verify = app.add_subcommand("verify", "re-verify a serialized certificate file");
    verify->add_option("path", verify_path, "certificate JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(verify_path);
        ctx.load_config();
        int rc = 0;
        if (scan->parsed()) {
            ctx.command = "scan";
            rc = cmd_scan(ctx);
        } else if (orbit->parsed()) {
            ctx.command = "orbit";
            rc = cmd_orbit(ctx);
        } else if (nf->parsed()) {
            ctx.command = "nf";
            rc = cmd_nf(ctx);
        } else if (dim->parsed()) {
            ctx.command = "dim";
            rc = cmd_dim(ctx);
        } else if (entropy->parsed()) {
            ctx.command = "entropy";
            rc = cmd_entropy(ctx);
        }
        ctx.write_manifest();
        return rc;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const VerifyError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const PrecisionError& e) {
        if (!ctx.command.empty()) ctx.write_manifest();
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition unmet: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition unmet: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
