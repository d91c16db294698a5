#include "krank/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "krank/asymptotics.hpp"
#include "krank/errors.hpp"
#include "krank/exact_engine.hpp"

namespace krank {

namespace {

constexpr std::pair<SweepKind, std::string_view> kKindNames[] = {
    {SweepKind::crank_accuracy, "crank_accuracy"},
    {SweepKind::threshold_breakdown, "threshold_breakdown"},
    {SweepKind::main_theorem, "main_theorem"},
    {SweepKind::finite_difference, "finite_difference"},
    {SweepKind::lemma1_constant, "lemma1_constant"},
    {SweepKind::dprz_ratio, "dprz_ratio"},
    {SweepKind::oracle_equivalence, "oracle_equivalence"},
};

constexpr std::pair<Estimator, std::string_view> kEstimatorNames[] = {
    {Estimator::sech2, "sech2"},
    {Estimator::sech2_hat, "sech2_hat"},
    {Estimator::parry_rhoades, "parry_rhoades"},
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(std::string_view s) {
    std::string text(s);
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

double parse_double(const std::string& t, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw SpecError(std::string("cannot parse ") + what + " from '" + t + "'");
    }
}

// Accepts plain integers and integral scientific notation such as 1e4.
std::int64_t parse_int(const std::string& t, const char* what) {
    const double v = parse_double(t, what);
    if (v != std::floor(v) || std::fabs(v) > 9.0e15) {
        throw SpecError(std::string(what) + " must be an integer, got '" + t + "'");
    }
    return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> parse_int_list(std::string_view s, const char* what) {
    std::vector<std::int64_t> out;
    for (const auto& t : tokens(s)) {
        const auto dots = t.find("..");
        if (dots != std::string::npos) {
            const std::int64_t lo = parse_int(t.substr(0, dots), what);
            const std::int64_t hi = parse_int(t.substr(dots + 2), what);
            if (hi < lo) throw SpecError(std::string("empty range in ") + what + ": " + t);
            for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(parse_int(t, what));
        }
    }
    return out;
}

// floor(x), tolerating the last-ulp error of pow/log on exact integers.
std::int64_t nudged_floor(double x) { return static_cast<std::int64_t>(std::floor(x * (1.0 + 1e-12))); }

std::string format_int_list(const std::vector<std::int64_t>& v) {
    std::string out;
    for (auto x : v) out += " " + std::to_string(x);
    return out;
}

struct Cell {
    std::int64_t k;
    std::int64_t n;
    std::int64_t m;
};

class CellEvaluator {
public:
    CellEvaluator(const SweepSpec& spec, const PartitionTable& table)
        : spec_(spec), table_(table) {
        if (spec.kind == SweepKind::oracle_equivalence) {
            const std::int64_t top = spec.n_grid.empty() ? 0 : spec.n_grid.back();
            products_ = partition_series_by_products(top);
        }
    }

    ReportRow operator()(const Cell& c) const {
        ReportRow row;
        row.kind = spec_.kind;
        row.k = c.k;
        row.r = spec_.kind == SweepKind::finite_difference ? spec_.r : 0;
        row.n = c.n;
        row.m = c.m;
        switch (spec_.kind) {
            case SweepKind::oracle_equivalence: oracle(row); break;
            case SweepKind::crank_accuracy:
            case SweepKind::threshold_breakdown: crank(row); break;
            case SweepKind::main_theorem: main_theorem(row); break;
            case SweepKind::finite_difference: finite_difference(row); break;
            case SweepKind::lemma1_constant: lemma1(row); break;
            case SweepKind::dprz_ratio: dprz(row); break;
        }
        decide_pass(row);
        return row;
    }

private:
    static void set_exact(ReportRow& row, const mpz_class& v) {
        row.exact_text = v.get_str();
        row.exact = SignedLogReal::from_mpz(v);
    }

    void oracle(ReportRow& row) const {
        const mpz_class exact = n_k_exact(table_, {row.k, row.m, row.n});
        const auto prefix = std::span<const mpz_class>(products_).first(static_cast<std::size_t>(row.n) + 1);
        const mpz_class coeff = n_k_oracle_series(row.k, row.m, prefix).coeffs.back();
        set_exact(row, exact);
        row.estimate = SignedLogReal::from_mpz(coeff);
        if (exact != 0) row.rel_err = relative_error(exact, coeff);
        row.pass = (exact == coeff);
    }

    void crank(ReportRow& row) const {
        const mpz_class exact = n_k_exact(table_, {row.k, row.m, row.n});
        set_exact(row, exact);
        const SignedLogReal p_n = SignedLogReal::from_mpz(table_.at(row.n));
        switch (spec_.estimator) {
            case Estimator::sech2: row.estimate = dyson_sech_estimate(row.m, row.n, p_n); break;
            case Estimator::sech2_hat: row.estimate = dyson_sech_estimate(row.m, row.n, hat_p(row.n)); break;
            case Estimator::parry_rhoades:
                row.estimate = parry_rhoades_estimate(row.k, row.m, row.n, p_n);
                break;
        }
        row.bound = error_bound_zn1(row.m, row.n);
        if (exact != 0) row.rel_err = relative_error(row.exact, row.estimate);
    }

    void main_theorem(ReportRow& row) const {
        const mpz_class exact = n_k_exact(table_, {row.k, row.m, row.n});
        const mpz_class lead = main_term_exact(table_, row.k, row.m, row.n);
        set_exact(row, exact);
        row.estimate = SignedLogReal::from_mpz(lead);
        row.bound = error_bound_main(row.k, row.m, row.n);
        if (exact != 0) row.rel_err = relative_error(exact, lead);
    }

    void finite_difference(ReportRow& row) const {
        std::vector<mpz_class> run;
        for (std::int64_t j = 0; j <= spec_.r; ++j) {
            run.push_back(n_k_exact(table_, {row.k, row.m + j, row.n}));
        }
        const mpz_class exact = backward_difference(spec_.r, run).front();
        set_exact(row, exact);
        row.estimate = corollary_prediction(spec_.r, row.m, row.n,
                                            SignedLogReal::from_mpz(table_.at(row.n - row.m)));
        row.bound = error_bound_corollary(spec_.r, row.m, row.n);
        if (exact != 0) row.rel_err = relative_error(row.exact, row.estimate);
    }

    void lemma1(ReportRow& row) const {
        const mpz_class& p = table_.at(row.n);
        set_exact(row, p);
        row.estimate = hat_p(row.n);
        const double scaled = lemma1_scaled_error(table_, row.n);
        const double dn = static_cast<double>(row.n);
        // bound = n^{-1} e^{B sqrt(n)/2} / p(n), so rel_err = scaled * bound.
        const double log_bound = kB * std::sqrt(dn) / 2.0 - std::log(dn) - row.exact.log_mag();
        row.bound = std::exp(log_bound);
        row.ratio = scaled;
        row.rel_err = scaled * std::exp(log_bound);
    }

    void dprz(ReportRow& row) const {
        row.exact = dprz_lhs(table_, row.m, row.n);
        row.exact_text = row.exact.to_string();
        row.estimate = dprz_rhs(row.m, row.n);
        row.bound = error_bound_dprz(row.m, row.n);
        if (!row.exact.is_zero()) row.rel_err = relative_error(row.exact, row.estimate);
    }

    void decide_pass(ReportRow& row) const {
        if (row.rel_err && row.bound && !row.ratio) row.ratio = *row.rel_err / *row.bound;
        if (spec_.kind == SweepKind::oracle_equivalence) return;
        if (!row.rel_err) {
            // exact == 0: excluded from the error statistics
            row.pass = true;
            return;
        }
        if (spec_.kind == SweepKind::threshold_breakdown) {
            const auto q = row.quotient();
            row.pass = q && std::isfinite(*q) && (!spec_.threshold || *q <= *spec_.threshold);
            return;
        }
        row.pass = row.ratio && std::isfinite(*row.ratio) &&
                   (!spec_.threshold || *row.ratio <= *spec_.threshold);
    }

    const SweepSpec& spec_;
    const PartitionTable& table_;
    std::vector<mpz_class> products_;
};

bool uses_k(SweepKind kind) {
    return kind != SweepKind::lemma1_constant && kind != SweepKind::dprz_ratio;
}

}  // namespace

std::string_view to_string(SweepKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

SweepKind parse_sweep_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw SpecError("unknown sweep kind '" + std::string(name) + "'");
}

std::string_view claim_for(SweepKind kind) {
    switch (kind) {
        case SweepKind::crank_accuracy: return "sech^2 crank density with error e^{-u} + m^2/n^{3/2}";
        case SweepKind::threshold_breakdown: return "sech^2 crank density fails at |m| ~ n^{3/4}";
        case SweepKind::main_theorem: return "N_k(m,n) ~ F_k(1;m,n) for sqrt(n) << m < n/2";
        case SweepKind::finite_difference: return "r-th m-difference of N_k ~ (pi/sqrt(6(n-m)))^{r+1} p(n-m)";
        case SweepKind::lemma1_constant: return "p(n) - p-hat(n) << n^{-1} e^{B sqrt(n)/2}";
        case SweepKind::dprz_ratio: return "(p(n-m+1)-p(n-m))/p(n) ~ (B/(8 sqrt n)) sech^2(Bm/(4 sqrt n))";
        case SweepKind::oracle_equivalence: return "finite p-sum equals the generating-function coefficient";
    }
    return "";
}

std::string_view to_string(Estimator e) {
    for (const auto& [k, name] : kEstimatorNames) {
        if (k == e) return name;
    }
    return "unknown";
}

Estimator parse_estimator(std::string_view name) {
    for (const auto& [k, n] : kEstimatorNames) {
        if (n == name) return k;
    }
    throw SpecError("unknown estimator '" + std::string(name) + "'");
}

MRule MRule::parse(std::string_view text) {
    const auto t = tokens(text);
    if (t.empty()) throw SpecError("empty m_rule");
    MRule rule;
    const std::string& head = t[0];
    if (head == "all") {
        if (t.size() != 1) throw SpecError("m_rule 'all' takes no arguments");
        rule.type = Type::all;
    } else if (head == "list") {
        rule.type = Type::list;
        for (std::size_t i = 1; i < t.size(); ++i) rule.values.push_back(parse_int(t[i], "m"));
    } else if (head == "power") {
        if (t.size() < 2 || t.size() > 3) throw SpecError("m_rule 'power' expects EXPONENT [COEF]");
        rule.type = Type::power;
        rule.exponent = parse_double(t[1], "exponent");
        if (t.size() == 3) rule.coef = parse_double(t[2], "coefficient");
    } else if (head == "sqrtlog") {
        if (t.size() != 2) throw SpecError("m_rule 'sqrtlog' expects COEF");
        rule.type = Type::sqrt_log;
        rule.coef = parse_double(t[1], "coefficient");
    } else if (head == "geometric") {
        if (t.size() < 2 || t.size() > 4) {
            throw SpecError("m_rule 'geometric' expects STEPS [COEF] [HI_FRACTION]");
        }
        rule.type = Type::geometric;
        rule.steps = static_cast<int>(parse_int(t[1], "steps"));
        if (rule.steps < 1) throw SpecError("geometric steps must be >= 1");
        if (t.size() >= 3) rule.coef = parse_double(t[2], "coefficient");
        if (t.size() == 4) rule.hi_fraction = parse_double(t[3], "hi fraction");
    } else {
        throw SpecError("unknown m_rule '" + head + "'");
    }
    return rule;
}

std::string MRule::to_string() const {
    char buf[128];
    switch (type) {
        case Type::all: return "all";
        case Type::list: return "list" + format_int_list(values);
        case Type::power: std::snprintf(buf, sizeof buf, "power %.17g %.17g", exponent, coef); return buf;
        case Type::sqrt_log: std::snprintf(buf, sizeof buf, "sqrtlog %.17g", coef); return buf;
        case Type::geometric:
            std::snprintf(buf, sizeof buf, "geometric %d %.17g %.17g", steps, coef, hi_fraction);
            return buf;
    }
    return {};
}

std::vector<std::int64_t> MRule::expand(std::int64_t n) const {
    std::vector<std::int64_t> out;
    const double dn = static_cast<double>(n);
    switch (type) {
        case Type::all:
            for (std::int64_t m = 0; m <= n; ++m) out.push_back(m);
            break;
        case Type::list: out = values; break;
        case Type::power: out.push_back(nudged_floor(coef * std::pow(dn, exponent))); break;
        case Type::sqrt_log: out.push_back(nudged_floor(coef * std::sqrt(dn) * std::log(dn))); break;
        case Type::geometric: {
            const auto lo = static_cast<std::int64_t>(std::ceil(coef * std::sqrt(dn) * std::log(dn)));
            const std::int64_t hi = nudged_floor(hi_fraction * dn);
            if (lo > hi) break;
            if (steps == 1) {
                out.push_back(lo);
                break;
            }
            const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
            for (int i = 0; i < steps; ++i) {
                const double x = static_cast<double>(lo) * std::pow(ratio, static_cast<double>(i) / (steps - 1));
                out.push_back(std::clamp<std::int64_t>(std::llround(x), lo, hi));
            }
            break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (auto m : out) {
        if (m < 0 || m > n) {
            throw SpecError("m_rule '" + to_string() + "' produced m = " + std::to_string(m) +
                            " outside [0, " + std::to_string(n) + "]");
        }
    }
    return out;
}

void SweepSpec::validate() const {
    if (n_grid.empty()) throw SpecError("n_grid is empty");
    if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw SpecError("n_grid is not sorted");
    if (n_grid.front() < 1) throw SpecError("n_grid values must be >= 1");
    if (uses_k(kind)) {
        if (k_list.empty()) throw SpecError("k_list is empty");
        for (auto k : k_list) {
            if (k < 1) throw SpecError("k values must be >= 1");
        }
    }
    if (r < 0) throw SpecError("r must be >= 0");
    if (threshold && std::isnan(*threshold)) throw SpecError("threshold is NaN");
}

SweepSpec parse_sweep_spec(std::string_view text) {
    SweepSpec spec;
    bool have_kind = false;
    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw SpecError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key == "kind") {
            spec.kind = parse_sweep_kind(value);
            have_kind = true;
        } else if (key == "n_grid") {
            spec.n_grid = parse_int_list(value, "n_grid");
        } else if (key == "m_rule") {
            spec.m_rule = MRule::parse(value);
        } else if (key == "k_list") {
            spec.k_list = parse_int_list(value, "k_list");
        } else if (key == "r") {
            spec.r = parse_int(value, "r");
        } else if (key == "estimator") {
            spec.estimator = parse_estimator(value);
        } else if (key == "threshold") {
            spec.threshold = parse_double(value, "threshold");
        } else if (key == "output") {
            spec.output = value;
        } else {
            throw SpecError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (!have_kind) throw SpecError("spec has no 'kind'");
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw SpecError("cannot open spec file " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_sweep_spec(buf.str());
}

std::int64_t required_table_size(const SweepSpec& spec) {
    if (spec.n_grid.empty()) return 0;
    const std::int64_t top = *std::max_element(spec.n_grid.begin(), spec.n_grid.end());
    // dprz at m = 0 reads p(n + 1)
    return spec.kind == SweepKind::dprz_ratio ? top + 1 : top;
}

std::optional<double> ReportRow::quotient() const {
    if (exact.is_zero() || estimate.is_zero()) return std::nullopt;
    return (exact / estimate).to_double();
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec, const PartitionTable& table, unsigned threads) {
    spec.validate();
    if (table.max_n() < required_table_size(spec)) {
        throw RangeError("run_sweep: table max_n = " + std::to_string(table.max_n()) +
                         " is smaller than the sweep needs (" +
                         std::to_string(required_table_size(spec)) + ")");
    }

    std::vector<Cell> cells;
    const std::vector<std::int64_t> ks = uses_k(spec.kind) ? spec.k_list : std::vector<std::int64_t>{0};
    for (auto k : ks) {
        for (auto n : spec.n_grid) {
            if (spec.kind == SweepKind::lemma1_constant) {
                cells.push_back({k, n, 0});
                continue;
            }
            for (auto m : spec.m_rule.expand(n)) cells.push_back({k, n, m});
        }
    }

    const CellEvaluator eval(spec, table);
    std::vector<ReportRow> rows(cells.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, cells.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
            try {
                rows[i] = eval(cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(cells.size());
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.k, a.n, a.m) < std::tie(b.k, b.n, b.m);
    });
    return rows;
}

BoundFit fit_bound_constant(const std::vector<ReportRow>& rows) {
    std::optional<BoundFit> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].ratio;
        if (!r || !std::isfinite(*r)) continue;
        if (!best || *r > best->constant) best = BoundFit{*r, i};
    }
    if (!best) throw std::invalid_argument("fit_bound_constant: no row has a finite ratio");
    return *best;
}

std::string format_real(std::optional<double> x) {
    if (!x) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *x);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.kind) << ',' << r.k << ',' << r.r << ',' << r.n << ',' << r.m << ','
            << r.exact_text << ',' << r.estimate.to_string() << ',' << format_real(r.rel_err) << ','
            << format_real(r.bound) << ',' << format_real(r.ratio) << ','
            << (r.pass ? "true" : "false") << '\n';
    }
}

std::string to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

}  // namespace krank
