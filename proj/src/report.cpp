#include "morseopt/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "morseopt/version.hpp"

namespace morseopt {

namespace {

using nlohmann::json;

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
    template <typename F>
    auto time(const std::string& name, F&& fn) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(name, start);
        } else {
            auto out = fn();
            record(name, start);
            return out;
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point start) {
        const auto stop = std::chrono::steady_clock::now();
        sink_[name] = std::chrono::duration<double, std::milli>(stop - start).count();
    }
    std::map<std::string, double>& sink_;
};

json complex_json(const Complex& z) { return json::array({round12(z.real()), round12(z.imag())}); }

std::string format12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

AnalysisOutcome run_analysis(const Polynomial& f, const ToolConfig& config) {
    AnalysisOutcome out;
    StageTimer timer(out.timings_ms);

    out.support = timer.time("convenient_support", [&] { return is_convenient_support(f); });

    const GroebnerBasis gb =
        timer.time("groebner", [&] { return buchberger(gradient(f), config.order, config.limits()); });
    if (!is_zero_dimensional(gb)) {
        throw PositiveDimensionalError(
            "the gradient ideal is positive-dimensional; the total Milnor number is infinite");
    }
    const QuotientBasis qb = quotient_basis(gb);
    out.total_milnor = qb.size();

    try {
        out.points = timer.time("variety", [&] { return solve_variety(f, gb, qb, config.variety()); });
        out.radicality = radicality_report(f, qb.size(), out.points, config.variety());
        out.candidate_inf = candidate_infimum(f, out.points, config.variety());
        out.conclusive = out.radicality.verdict != RadicalityVerdict::inconclusive &&
                         out.radicality.morse.verdict != MorseVerdict::inconclusive;
    } catch (const ClusteringInconclusiveError& e) {
        out.conclusive = false;
        out.note = e.what();
        out.radicality.total_milnor = qb.size();
        out.radicality.verdict = RadicalityVerdict::inconclusive;
        out.radicality.morse.verdict = MorseVerdict::inconclusive;
    }
    return out;
}

json report_skeleton(const std::string& command, const Polynomial& f, const ToolConfig& config) {
    json j;
    j["schema"] = kReportSchema;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["input"] = {
        {"polynomial", f.to_string()},
        {"nvars", f.nvars()},
    };
    const auto deg = f.degree();
    if (deg)
        j["input"]["degree"] = *deg;
    else
        j["input"]["degree"] = nullptr;

    const auto& v = config.variety();
    j["tolerances"] = {
        {"cluster", v.cluster_tol},
        {"residual", v.residual_tol},
        {"nondegeneracy", v.nondegeneracy_tol},
        {"value_gap", v.value_gap_tol},
        {"real", v.real_tol},
        {"seed", v.seed},
        {"gap", config.relax.sdp.gap_tol},
        {"feasibility", config.relax.sdp.feasibility_tol},
        {"max_iter", config.relax.sdp.max_iter},
        {"certificate", config.relax.certificate_tol},
        {"extract", config.relax.extract_tol},
        {"stabilization", config.relax.stab_tol},
        {"rationalize_max_den", config.relax.rationalize_max_den},
        {"max_coeff_bits", config.limits().max_coeff_bits},
        {"order", config.order.name()},
    };
    return j;
}

json analysis_json(const AnalysisOutcome& o) {
    json a;
    {
        json witnesses = json::array();
        for (const auto& w : o.support.axis_witness) {
            if (w)
                witnesses.push_back(w->exponents());
            else
                witnesses.push_back(nullptr);
        }
        a["convenient_support"] = {{"convenient", o.support.convenient}, {"witnesses", witnesses}};
    }
    if (o.total_milnor)
        a["total_milnor"] = *o.total_milnor;
    else
        a["total_milnor"] = "infinite";
    a["num_points"] = o.points.size();

    json pts = json::array();
    for (const auto& cp : o.points) {
        json loc = json::array();
        for (Eigen::Index i = 0; i < cp.location.size(); ++i) loc.push_back(complex_json(cp.location(i)));
        pts.push_back({
            {"location", loc},
            {"multiplicity", cp.multiplicity},
            {"value", complex_json(cp.critical_value)},
            {"hessian_det", complex_json(cp.hessian_det)},
            {"residual", round12(cp.residual)},
            {"is_real", cp.is_real},
        });
    }
    a["critical_points"] = pts;

    {
        const auto& m = o.radicality.morse;
        json dets = json::array(), rels = json::array();
        for (const auto& d : m.hessian_dets) dets.push_back(complex_json(d));
        for (double r : m.relative_dets) rels.push_back(round12(r));
        a["morse"] = {
            {"verdict", to_string(m.verdict)},
            {"hessian_dets", dets},
            {"relative_dets", rels},
            {"nondegeneracy_tol", m.nondegeneracy_tol},
            {"value_gap_tol", m.value_gap_tol},
            {"note", m.note},
        };
        if (std::isfinite(m.min_value_gap))
            a["morse"]["min_value_gap"] = round12(m.min_value_gap);
        else
            a["morse"]["min_value_gap"] = nullptr;
    }
    {
        const auto& r = o.radicality;
        json rj = {{"verdict", to_string(r.verdict)}, {"num_points", r.num_points}, {"note", r.note}};
        if (r.total_milnor)
            rj["total_milnor"] = *r.total_milnor;
        else
            rj["total_milnor"] = "infinite";
        a["radicality"] = rj;
    }
    if (o.candidate_inf)
        a["candidate_infimum"] = {{"exists", true}, {"value", round12(*o.candidate_inf)}};
    else
        a["candidate_infimum"] = {{"exists", false}, {"value", nullptr}};
    a["conclusive"] = o.conclusive;
    if (!o.note.empty()) a["note"] = o.note;

    json t;
    for (const auto& [k, ms] : o.timings_ms) t[k] = round12(ms);
    a["timings_ms"] = t;
    return a;
}

json trace_json(const ConvergenceTrace& trace) {
    json tj;
    json results = json::array();
    for (const auto& r : trace.results) {
        json rj = {
            {"order", r.order},
            {"status", to_string(r.status)},
            {"gamma", round12(r.gamma)},
            {"identity_residual", round12(r.identity_residual)},
            {"identity_residual_float", round12(r.identity_residual_float)},
            {"rationalize_den_used", r.rationalize_den_used},
            {"iterations", r.iterations},
            {"sdp_gap", round12(r.sdp_gap)},
        };
        if (!r.note.empty()) rj["note"] = r.note;
        json phis = json::array();
        for (const auto& p : r.multipliers) phis.push_back(p.to_string());
        rj["multipliers"] = phis;
        json sq = json::array();
        for (const auto& s : r.sos_squares) sq.push_back(s.to_string());
        rj["squares"] = sq;
        results.push_back(std::move(rj));
    }
    tj["results"] = results;
    tj["monotone"] = trace.monotone;
    tj["stabilized"] = trace.stabilized;
    json cc;
    if (trace.candidate_inf)
        cc["candidate_infimum"] = round12(*trace.candidate_inf);
    else
        cc["candidate_infimum"] = nullptr;
    cc["matches"] = trace.matches_candidate;
    cc["caveat"] = trace.caveat;
    tj["cross_check"] = cc;
    return tj;
}

std::string analysis_text(const Polynomial& f, const AnalysisOutcome& o) {
    std::ostringstream os;
    os << "polynomial: " << f.to_string() << "   (n = " << f.nvars() << ", degree = ";
    if (const auto d = f.degree())
        os << *d;
    else
        os << "-inf";
    os << ")\n";

    os << "convenient support: " << (o.support.convenient ? "yes" : "no");
    if (!o.support.convenient) {
        os << " (missing axes:";
        for (std::size_t i = 0; i < o.support.axis_witness.size(); ++i)
            if (!o.support.axis_witness[i]) os << " x" << i + 1;
        os << ")";
    } else {
        os << " (witnesses:";
        for (const auto& w : o.support.axis_witness) os << " " << w->to_string();
        os << ")";
    }
    os << "\n";

    if (o.total_milnor)
        os << "total Milnor number: " << *o.total_milnor << "\n";
    else
        os << "total Milnor number: infinite\n";

    os << "critical points (" << o.points.size() << "):\n";
    for (const auto& cp : o.points) {
        os << "  (";
        for (Eigen::Index i = 0; i < cp.location.size(); ++i) {
            if (i) os << ", ";
            const Complex z = cp.location(i);
            os << format12(z.real());
            if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << format12(z.imag()) << "i";
        }
        os << ")  multiplicity " << cp.multiplicity << "  value " << format12(cp.critical_value.real());
        if (cp.critical_value.imag() != 0.0)
            os << (cp.critical_value.imag() > 0 ? "+" : "") << format12(cp.critical_value.imag()) << "i";
        os << "  hessian_det " << format12(cp.hessian_det.real());
        if (cp.hessian_det.imag() != 0.0)
            os << (cp.hessian_det.imag() > 0 ? "+" : "") << format12(cp.hessian_det.imag()) << "i";
        os << (cp.is_real ? "  real" : "  complex") << "\n";
    }

    os << "morse: " << to_string(o.radicality.morse.verdict);
    if (std::isfinite(o.radicality.morse.min_value_gap) && o.points.size() > 1)
        os << "   (min value gap " << format12(o.radicality.morse.min_value_gap) << ")";
    os << "\n";
    os << "gradient ideal: " << to_string(o.radicality.verdict) << "   (|V| = " << o.radicality.num_points
       << ", mu = ";
    if (o.radicality.total_milnor)
        os << *o.radicality.total_milnor;
    else
        os << "infinite";
    os << ")\n";
    if (o.candidate_inf)
        os << "candidate infimum (min real critical value): " << format12(*o.candidate_inf) << "\n";
    else
        os << "candidate infimum: no real critical point\n";
    if (!o.note.empty()) os << "note: " << o.note << "\n";
    return os.str();
}

std::string trace_text(const ConvergenceTrace& trace) {
    std::ostringstream os;
    os << "  N   status              gamma             identity residual\n";
    for (const auto& r : trace.results) {
        char line[160];
        std::snprintf(line, sizeof(line), "%3u   %-18s %-17.12g %.6g\n", r.order,
                      to_string(r.status).c_str(), r.gamma, r.identity_residual);
        os << line;
        if (!r.note.empty()) os << "      note: " << r.note << "\n";
    }
    os << "monotone: " << (trace.monotone ? "yes" : "no")
       << "   stabilized: " << (trace.stabilized ? "yes" : "no") << "\n";
    if (trace.candidate_inf)
        os << "min real critical value: " << format12(*trace.candidate_inf) << "\n";
    if (!trace.caveat.empty()) os << "caveat: " << trace.caveat << "\n";
    return os.str();
}

}  // namespace morseopt
