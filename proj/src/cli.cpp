#include "mvindep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string_view>

#include "mvindep/errors.hpp"
#include "mvindep/radial.hpp"
#include "mvindep/ranksigns.hpp"
#include "mvindep/sample.hpp"

namespace mvindep::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        cells.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::string fixed3(double x) {
    if (std::isnan(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string nu_label(double nu) { return std::isinf(nu) ? "inf" : format_double(nu); }

double parse_nu(std::string_view text) {
    if (text == "inf") return efficiency::kGaussianNu;
    const auto v = parse_number(text);
    if (!v) throw InputError("table csv: bad degrees of freedom '" + std::string(text) + "'");
    return *v;
}

Json number_or_text(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return nullptr;
    return x;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open '" + path + "' for writing");
    file << text;
    if (!file) throw InputError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

// JSON field access with the field's dotted path in every error.
const Json& field(const Json& obj, const char* name, const std::string& where) {
    if (!obj.is_object() || !obj.contains(name))
        throw InputError("simulation config: missing required field '" + where + name + "'");
    return obj.at(name);
}

template <class T>
T as(const Json& value, const std::string& path) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError("simulation config: field '" + path + "' has the wrong type");
    }
}

double as_real(const Json& value, const std::string& path) {
    if (!value.is_number()) throw InputError("simulation config: field '" + path + "' must be a number");
    return value.get<double>();
}

std::size_t as_count(const Json& value, const std::string& path) {
    if (!value.is_number_integer() || value.get<long long>() < 0)
        throw InputError("simulation config: field '" + path + "' must be a non-negative integer");
    return value.get<std::size_t>();
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& value, int p, int q) {
    const std::string where = "konijn.M";
    if (!value.is_array() || value.size() != static_cast<std::size_t>(p))
        throw InputError("simulation config: field '" + where + "' must be a p x q array of rows");
    Eigen::MatrixXd m(p, q);
    for (int i = 0; i < p; ++i) {
        const Json& row = value[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(q))
            throw InputError("simulation config: field '" + where + "' must be a p x q array of rows");
        for (int j = 0; j < q; ++j)
            m(i, j) = as_real(row[static_cast<std::size_t>(j)], where);
    }
    return m;
}

std::string decision_text(const independence::TestResult& r) {
    return r.reject ? "reject independence" : "do not reject independence";
}

std::string text_report(const independence::TestResult& r) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "method      " << r.method << '\n'
       << "statistic   " << r.statistic << '\n'
       << "df          " << r.df << '\n'
       << "p-value     " << r.p_value << '\n'
       << "alpha       " << r.alpha << '\n'
       << "critical    " << r.critical_value << '\n'
       << "decision    " << decision_text(r) << '\n';
    return os.str();
}

std::string text_report(const efficiency::AREResult& r, const std::string& f, const std::string& g) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "method   " << efficiency::to_string(r.method) << '\n'
       << "p        " << r.p << "  f " << f << '\n'
       << "q        " << r.q << "  g " << g << '\n'
       << "ARE      " << fixed3(r.value) << "  (" << r.value << ")\n"
       << "C_p      " << r.C_p << '\n'
       << "D_p      " << r.D_p << '\n'
       << "C_q      " << r.C_q << '\n'
       << "D_q      " << r.D_q << '\n'
       << "A        " << r.A << '\n'
       << "B        " << r.B << '\n'
       << "factor   " << r.factor << '\n';
    return os.str();
}

std::string text_report(const efficiency::BoundResult& r) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "p        " << r.p << '\n'
       << "q        " << r.q << '\n'
       << "c_p      " << r.c_p << '\n'
       << "c_q      " << r.c_q << '\n'
       << "omega_p  " << r.omega_p << '\n'
       << "omega_q  " << r.omega_q << '\n'
       << "bound    " << fixed3(r.bound) << "  (" << r.bound << ")\n";
    return os.str();
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

Dataset parse_csv(std::istream& in) {
    Dataset ds;
    std::vector<double> flat;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first = true;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (first) {
            first = false;
            std::size_t numeric = 0;
            for (auto c : cells) numeric += parse_number(c).has_value();
            if (numeric == 0) {
                for (auto c : cells) ds.header.emplace_back(c);
                width = cells.size();
                continue;
            }
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw InputError("row " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " columns, found " + std::to_string(cells.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto v = parse_number(cells[j]);
            if (!v)
                throw InputError("row " + std::to_string(line_no) + ", column " +
                                 std::to_string(j + 1) + ": '" + std::string(cells[j]) +
                                 "' is not a finite number");
            flat.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) throw InputError("dataset has no data rows");
    ds.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < width; ++j)
            ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * width + j];
    return ds;
}

Dataset read_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw InputError("cannot open dataset '" + path + "'");
    return parse_csv(file);
}

Json to_json(const independence::TestResult& r) {
    Json j;
    j["method"] = r.method;
    j["statistic"] = number_or_text(r.statistic);
    j["df"] = r.df;
    j["p_value"] = r.p_value;
    j["alpha"] = r.alpha;
    j["critical_value"] = r.critical_value;
    j["reject"] = r.reject;
    return j;
}

Json to_json(const efficiency::AREResult& r) {
    Json j;
    j["method"] = std::string(efficiency::to_string(r.method));
    j["p"] = r.p;
    j["q"] = r.q;
    j["value"] = r.value;
    j["C_p"] = r.C_p;
    j["D_p"] = r.D_p;
    j["C_q"] = r.C_q;
    j["D_q"] = r.D_q;
    j["A"] = r.A;
    j["B"] = r.B;
    j["factor"] = r.factor;
    return j;
}

Json to_json(const efficiency::BoundResult& r) {
    Json j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["c_p"] = r.c_p;
    j["c_q"] = r.c_q;
    j["omega_p"] = r.omega_p;
    j["omega_q"] = r.omega_q;
    j["bound"] = r.bound;
    return j;
}

SimulationRequest simulation_from_json(const Json& doc) {
    if (!doc.is_object()) throw InputError("simulation config: top level must be an object");
    SimulationRequest req;
    auto& c = req.config;
    const Json& konijn = field(doc, "konijn", "");
    c.konijn.p = as<int>(field(konijn, "p", "konijn."), "konijn.p");
    c.konijn.q = as<int>(field(konijn, "q", "konijn."), "konijn.q");
    c.konijn.n = as_count(field(konijn, "n", "konijn."), "konijn.n");
    if (c.konijn.p < 1 || c.konijn.q < 1)
        throw InputError("simulation config: konijn.p and konijn.q must be >= 1");
    if (konijn.contains("f")) c.konijn.f = radial::parse_family(as<std::string>(konijn["f"], "konijn.f"));
    if (konijn.contains("g")) c.konijn.g = radial::parse_family(as<std::string>(konijn["g"], "konijn.g"));
    if (konijn.contains("delta")) c.konijn.delta = as_real(konijn["delta"], "konijn.delta");
    if (konijn.contains("M")) c.konijn.mixing = matrix_from_json(konijn["M"], c.konijn.p, c.konijn.q);

    c.replications = as_count(field(doc, "replications", ""), "replications");
    if (doc.contains("tests")) {
        const Json& tests = doc["tests"];
        if (!tests.is_array() || tests.empty())
            throw InputError("simulation config: field 'tests' must be a non-empty array");
        c.tests.clear();
        for (const auto& t : tests) c.tests.push_back(independence::parse_method(as<std::string>(t, "tests")));
    }
    if (doc.contains("alpha")) c.alpha = as_real(doc["alpha"], "alpha");
    if (doc.contains("estimator"))
        c.estimator = ranksigns::parse_estimator(as<std::string>(doc["estimator"], "estimator"));
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            throw InputError("simulation config: field 'seed' must be a non-negative integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("deltas")) {
        const Json& ds = doc["deltas"];
        if (!ds.is_array() || ds.empty())
            throw InputError("simulation config: field 'deltas' must be a non-empty array");
        for (const auto& d : ds) req.deltas.push_back(as_real(d, "deltas"));
    }
    // Model-level validation (ν range, mixing invertibility) reports as input errors too.
    try {
        (void)c.konijn.model();
        c.validate();
    } catch (const ModelError& e) {
        throw InputError(std::string("simulation config: ") + e.what());
    } catch (const DomainError& e) {
        throw InputError(std::string("simulation config: ") + e.what());
    }
    return req;
}

Json config_to_json(const montecarlo::SimConfig& c) {
    Json konijn;
    konijn["p"] = c.konijn.p;
    konijn["q"] = c.konijn.q;
    konijn["n"] = c.konijn.n;
    konijn["f"] = radial::format_family(c.konijn.f);
    konijn["g"] = radial::format_family(c.konijn.g);
    konijn["delta"] = c.konijn.delta;
    konijn["M"] = matrix_json(c.konijn.model().mixing());
    Json j;
    j["konijn"] = std::move(konijn);
    Json tests = Json::array();
    for (auto m : c.tests) tests.push_back(std::string(independence::to_string(m)));
    j["tests"] = std::move(tests);
    j["alpha"] = c.alpha;
    j["replications"] = c.replications;
    j["estimator"] = std::string(ranksigns::to_string(c.estimator));
    j["seed"] = c.seed;
    return j;
}

Json simulation_report(const montecarlo::SimConfig& config,
                       const std::vector<montecarlo::SimReport>& studies,
                       const std::vector<double>& deltas) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = config_to_json(config);
    if (!deltas.empty()) doc["config"]["deltas"] = deltas;
    doc["seed"] = config.seed;
    Json list = Json::array();
    for (const auto& study : studies) {
        Json s;
        s["delta"] = study.config.konijn.delta;
        s["df"] = study.df;
        s["replications"] = study.config.replications;
        Json tests = Json::array();
        for (const auto& t : study.tests) {
            Json tj;
            tj["method"] = std::string(independence::to_string(t.method));
            tj["successes"] = t.successes;
            tj["failures"] = t.failures;
            tj["rejections"] = t.rejections;
            tj["rate"] = number_or_text(t.rate);
            tj["ci95"] = Json::array({t.ci.low, t.ci.high});
            tj["ci_half_width"] = t.ci_half_width;
            Json qs = Json::array();
            for (const auto& q : t.quantiles)
                qs.push_back({{"probability", q.probability},
                              {"empirical", number_or_text(q.empirical)},
                              {"chi2", q.chi2}});
            tj["quantiles"] = std::move(qs);
            tj["ks_distance"] = number_or_text(t.ks_distance);
            tj["ks_critical_1pct"] = number_or_text(t.ks_critical);
            tests.push_back(std::move(tj));
        }
        s["tests"] = std::move(tests);
        list.push_back(std::move(s));
    }
    doc["studies"] = std::move(list);
    return doc;
}

std::string table_csv(const efficiency::AreTable& t) {
    std::ostringstream os;
    os << "method,p,q,nu_q,nu_p,are\n";
    const auto method = std::string(efficiency::to_string(t.method));
    for (std::size_t qi = 0; qi < t.dims.size(); ++qi)
        for (std::size_t nq = 0; nq < t.nus.size(); ++nq)
            for (std::size_t np = 0; np < t.nus.size(); ++np)
                os << method << ',' << t.p << ',' << t.dims[qi] << ',' << nu_label(t.nus[nq]) << ','
                   << nu_label(t.nus[np]) << ',' << format_double(t.at(qi, nq, np)) << '\n';
    return os.str();
}

std::string table_markdown(const efficiency::AreTable& t) {
    std::ostringstream os;
    os << (t.method == efficiency::AreMethod::VanDerWaerden
               ? "AREs of the van der Waerden test with respect to Wilks' test"
               : "AREs of the Wilcoxon test with respect to Wilks' test")
       << ", p = " << t.p << " (rows q, nu_q; columns nu_p; inf = Gaussian)\n\n";
    os << "| q | nu_q |";
    for (double nu : t.nus) os << ' ' << nu_label(nu) << " |";
    os << "\n|---|---|";
    for (std::size_t i = 0; i < t.nus.size(); ++i) os << "---|";
    os << '\n';
    for (std::size_t qi = 0; qi < t.dims.size(); ++qi)
        for (std::size_t nq = 0; nq < t.nus.size(); ++nq) {
            os << "| " << (nq == 0 ? std::to_string(t.dims[qi]) : "") << " | " << nu_label(t.nus[nq])
               << " |";
            for (std::size_t np = 0; np < t.nus.size(); ++np) os << ' ' << fixed3(t.at(qi, nq, np)) << " |";
            os << '\n';
        }
    return os.str();
}

std::string table_csv(const efficiency::BoundTable& t) {
    std::ostringstream os;
    os << "p,q,bound\n";
    for (std::size_t i = 0; i < t.dims.size(); ++i)
        for (std::size_t j = i; j < t.dims.size(); ++j)
            os << t.dims[i] << ',' << t.dims[j] << ',' << format_double(t.at(i, j)) << '\n';
    return os.str();
}

std::string table_markdown(const efficiency::BoundTable& t) {
    std::ostringstream os;
    os << "Hodges-Lehmann lower bound of the Wilcoxon/Wilks ARE (symmetric in p, q)\n\n";
    os << "| p/q |";
    for (int d : t.dims) os << ' ' << d << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < t.dims.size(); ++i) os << "---|";
    os << '\n';
    for (std::size_t i = 0; i < t.dims.size(); ++i) {
        os << "| " << t.dims[i] << " |";
        for (std::size_t j = 0; j < t.dims.size(); ++j)
            os << ' ' << (j >= i ? fixed3(t.at(i, j)) : "") << " |";
        os << '\n';
    }
    return os.str();
}

std::string trend_csv(const std::vector<efficiency::TrendRow>& rows) {
    std::ostringstream os;
    os << "# non-normative large-k trend\n";
    os << "k,c_k,omega_k,bound_kk,bound_1k\n";
    for (const auto& r : rows)
        os << r.k << ',' << format_double(r.c) << ',' << format_double(r.omega) << ','
           << format_double(r.bound_kk) << ',' << format_double(r.bound_1k) << '\n';
    return os.str();
}

std::string trend_markdown(const std::vector<efficiency::TrendRow>& rows) {
    std::ostringstream os;
    os << "Large-k trend of the Hodges-Lehmann bound (non-normative)\n\n";
    os << "| k | c_k | omega_k | bound(k,k) | bound(1,k) |\n|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "| %d | %.6f | %.6f | %.3f | %.3f |\n", r.k, r.c, r.omega,
                      r.bound_kk, r.bound_1k);
        os << buf;
    }
    return os.str();
}

efficiency::AreTable parse_are_table_csv(std::istream& in) {
    efficiency::AreTable t;
    std::string line;
    if (!std::getline(in, line) || trim(line) != "method,p,q,nu_q,nu_p,are")
        throw InputError("table csv: unexpected header");
    struct Row {
        int q;
        double nu_q, nu_p, value;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 6) throw InputError("table csv: expected 6 cells per row");
        t.method = efficiency::parse_are_method(cells[0]);
        const auto p = parse_number(cells[1]);
        const auto q = parse_number(cells[2]);
        const auto v = parse_number(cells[5]);
        if (!p || !q || !v) throw InputError("table csv: malformed row '" + line + "'");
        t.p = static_cast<int>(*p);
        rows.push_back({static_cast<int>(*q), parse_nu(cells[3]), parse_nu(cells[4]), *v});
    }
    for (const auto& r : rows) {
        if (t.dims.empty() || t.dims.back() != r.q) t.dims.push_back(r.q);
        if (t.dims.size() == 1 && std::find(t.nus.begin(), t.nus.end(), r.nu_p) == t.nus.end())
            t.nus.push_back(r.nu_p);
        t.values.push_back(r.value);
    }
    if (t.values.size() != t.dims.size() * t.nus.size() * t.nus.size())
        throw InputError("table csv: grid is not rectangular");
    return t;
}

efficiency::BoundTable parse_bound_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "p,q,bound")
        throw InputError("table csv: unexpected header");
    std::vector<std::array<double, 3>> rows;
    std::vector<int> dims;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 3) throw InputError("table csv: expected 3 cells per row");
        const auto p = parse_number(cells[0]);
        const auto q = parse_number(cells[1]);
        const auto v = parse_number(cells[2]);
        if (!p || !q || !v) throw InputError("table csv: malformed row '" + line + "'");
        rows.push_back({*p, *q, *v});
        if (std::find(dims.begin(), dims.end(), static_cast<int>(*q)) == dims.end())
            dims.push_back(static_cast<int>(*q));
    }
    efficiency::BoundTable t;
    t.dims = dims;
    const std::size_t m = dims.size();
    t.values.assign(m * m, std::nan(""));
    auto index = [&](double d) {
        return static_cast<std::size_t>(std::find(dims.begin(), dims.end(), static_cast<int>(d)) -
                                        dims.begin());
    };
    for (const auto& r : rows) {
        const std::size_t i = index(r[0]);
        const std::size_t j = index(r[1]);
        if (i >= m || j >= m) throw InputError("table csv: dimension outside the grid");
        t.values[i * m + j] = r[2];
        t.values[j * m + i] = r[2];
    }
    return t;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank-based tests of multivariate independence and their efficiencies"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand("test", "Test independence of the first p columns from the rest");
    std::string data_path;
    int test_p = 0;
    std::string method_name = "vdw";
    std::string estimator_name = "tyler";
    double alpha = 0.05;
    std::string test_format = "text";
    test->add_option("data", data_path, "CSV dataset, one observation per row")->required();
    test->add_option("--p", test_p, "Dimension of the first block")->required();
    test->add_option("--method", method_name, "wilks | sign | wilcoxon | vdw")
        ->check(CLI::IsMember({"wilks", "sign", "wilcoxon", "vdw"}));
    test->add_option("--estimator", estimator_name, "Location/shape estimator for rank tests")
        ->check(CLI::IsMember({"tyler", "moment"}));
    test->add_option("--alpha", alpha, "Level of the test");
    test->add_option("--format", test_format)->check(CLI::IsMember({"json", "text"}));

    // are
    auto* are = app.add_subcommand("are", "Asymptotic relative efficiency with respect to Wilks' test");
    int are_p = 0;
    int are_q = 0;
    std::string f_text;
    std::string g_text;
    std::string are_method = "vdw";
    std::string are_format = "text";
    are->add_option("--p", are_p)->required();
    are->add_option("--q", are_q)->required();
    are->add_option("--f", f_text, "gauss[:scale] | t:<nu> | extremal[:sigma]")->required();
    are->add_option("--g", g_text, "gauss[:scale] | t:<nu> | extremal[:sigma]")->required();
    are->add_option("--method", are_method)->check(CLI::IsMember({"vdw", "wilcoxon"}));
    are->add_option("--format", are_format)->check(CLI::IsMember({"json", "text"}));

    // tables
    auto* tables = app.add_subcommand("tables", "Reproduce the ARE and lower-bound tables");
    std::string which;
    std::string table_out;
    std::string table_format = "markdown";
    tables->add_option("--which", which)->required()->check(CLI::IsMember({"1", "2", "3", "trend"}));
    tables->add_option("--out", table_out, "Output file (default: stdout)");
    tables->add_option("--format", table_format)->check(CLI::IsMember({"csv", "markdown"}));

    // bound
    auto* bound = app.add_subcommand("bound", "Hodges-Lehmann lower bound for dimensions p, q");
    int bound_p = 0;
    int bound_q = 0;
    std::string bound_format = "text";
    bound->add_option("--p", bound_p)->required();
    bound->add_option("--q", bound_q)->required();
    bound->add_option("--format", bound_format)->check(CLI::IsMember({"json", "text"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power study");
    std::string config_path;
    std::string sim_out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    simulate->add_option("--config", config_path, "JSON configuration")->required();
    simulate->add_option("--out", sim_out, "Report file (default: stdout)");
    simulate->add_option("--seed", seed, "Overrides the config seed (default " +
                                             std::to_string(montecarlo::kDefaultSeed) + ")");
    simulate->add_option("--threads", threads, "Worker threads, 0 = all cores; results do not depend on it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*test) {
            const Dataset ds = read_csv(data_path);
            const auto cols = ds.values.cols();
            if (test_p < 1 || test_p >= cols)
                throw InputError("--p must satisfy 1 <= p < " + std::to_string(cols) +
                                 " (the number of columns)");
            const PairedSample sample = PairedSample::split(ds.values, test_p);
            const auto result = independence::run_test(
                sample, independence::parse_method(method_name),
                ranksigns::parse_estimator(estimator_name), alpha);
            if (test_format == "json") {
                Json j = to_json(result);
                j["n"] = sample.n();
                j["p"] = sample.p();
                j["q"] = sample.q();
                j["estimator"] = method_name == "wilks" ? "moment" : estimator_name;
                out << j.dump(2) << '\n';
            } else {
                out << text_report(result);
            }
        } else if (*are) {
            const auto f = radial::parse_family(f_text);
            const auto g = radial::parse_family(g_text);
            const auto result = efficiency::are(efficiency::parse_are_method(are_method), are_p, f, are_q, g);
            if (are_format == "json") {
                Json j = to_json(result);
                j["f"] = radial::format_family(f);
                j["g"] = radial::format_family(g);
                out << j.dump(2) << '\n';
            } else {
                out << text_report(result, radial::format_family(f), radial::format_family(g));
            }
        } else if (*tables) {
            std::string text;
            const bool csv = table_format == "csv";
            if (which == "1" || which == "2") {
                const auto t = which == "1" ? efficiency::table1() : efficiency::table2();
                text = csv ? table_csv(t) : table_markdown(t);
            } else if (which == "3") {
                const auto t = efficiency::table3();
                text = csv ? table_csv(t) : table_markdown(t);
            } else {
                const auto rows = efficiency::large_k_trend(50);
                text = csv ? trend_csv(rows) : trend_markdown(rows);
            }
            write_output(text, table_out, out);
        } else if (*bound) {
            const auto result = efficiency::hl_lower_bound(bound_p, bound_q);
            if (bound_format == "json") out << to_json(result).dump(2) << '\n';
            else out << text_report(result);
        } else if (*simulate) {
            Json doc;
            try {
                doc = Json::parse(read_text_file(config_path));
            } catch (const nlohmann::json::parse_error& e) {
                throw InputError("simulation config: " + std::string(e.what()));
            }
            SimulationRequest req = simulation_from_json(doc);
            if (seed) req.config.seed = *seed;
            req.config.threads = threads;
            std::vector<montecarlo::SimReport> studies;
            if (req.deltas.empty()) studies.push_back(montecarlo::run_study(req.config));
            else studies = montecarlo::run_power_curve(req.config, req.deltas);
            write_output(simulation_report(req.config, studies, req.deltas).dump(2) + "\n", sim_out, out);
        }
    } catch (const DegenerateDataError& e) {
        err << "error: degenerate data: " << e.what() << '\n';
        return kDegenerate;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}

}  // namespace mvindep::cli
