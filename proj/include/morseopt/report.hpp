#ifndef MORSEOPT_REPORT_HPP
#define MORSEOPT_REPORT_HPP

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "morseopt/sos.hpp"

namespace morseopt {

// Bundle of every knob the pipelines accept; the CLI populates it from
// flags and the environment.
struct ToolConfig {
    RelaxationParams relax;  // carries SDP, certificate, variety and limit knobs
    MonomialOrder order = MonomialOrder::grevlex();

    VarietyTolerances& variety() { return relax.variety; }
    const VarietyTolerances& variety() const { return relax.variety; }
    GroebnerLimits& limits() { return relax.limits; }
    const GroebnerLimits& limits() const { return relax.limits; }
};

// Everything the certificate pipeline produces for one polynomial.
struct AnalysisOutcome {
    ConvenientSupport support;
    std::optional<std::size_t> total_milnor;  // nullopt encodes "infinite"
    std::vector<CriticalPoint> points;
    RadicalityReport radicality;
    std::optional<double> candidate_inf;
    bool conclusive = true;
    std::string note;
    std::map<std::string, double> timings_ms;
};

AnalysisOutcome run_analysis(const Polynomial& f, const ToolConfig& config);

// Rounds to 12 significant digits; reported floats all pass through this.
double round12(double x);

nlohmann::json report_skeleton(const std::string& command, const Polynomial& f,
                               const ToolConfig& config);
nlohmann::json analysis_json(const AnalysisOutcome& outcome);
nlohmann::json trace_json(const ConvergenceTrace& trace);

std::string analysis_text(const Polynomial& f, const AnalysisOutcome& outcome);
std::string trace_text(const ConvergenceTrace& trace);

}  // namespace morseopt

#endif
