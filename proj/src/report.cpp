#include "bps/report.hpp"

#include <cstdio>

namespace bps {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

const char* kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::CertifiedEntangled: return "certified_entangled";
    case VerdictKind::SeparableWithin: return "separable_within";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string sigma_list(const Analysis& a, bool full, const char* sep) {
  const auto& sv = a.summary.singular_values;
  const std::size_t count = full ? sv.size() : std::min<std::size_t>(sv.size(), 16);
  std::string out;
  for (std::size_t k = 0; k < count; ++k) {
    if (k) out += sep;
    out += fmt17(sv[k]);
  }
  return out;
}

std::string emit_json(const Analysis& a, bool full) {
  const Verdict& v = a.verdict;
  const Evidence& e = v.evidence;
  std::string out = "{\n";
  out += "  \"verdict_kind\": \"" + std::string(kind_name(v.kind)) + "\",\n";
  if (v.kind == VerdictKind::CertifiedEntangled)
    out += "  \"sigma2_lower\": " + fmt17(v.sigma2_lower) + ",\n";
  if (v.kind == VerdictKind::SeparableWithin)
    out += "  \"delta\": " + fmt17(v.delta) + ",\n";
  if (v.kind == VerdictKind::Inconclusive)
    out += "  \"reason\": \"" + json_escape(v.reason) + "\",\n";
  out += "  \"sigma2_interval\": [" + fmt17(e.sigma2.lo) + ", " + fmt17(e.sigma2.hi) + "],\n";
  out += "  \"max_minor\": " + fmt17(e.max_minor) + ",\n";
  out += "  \"tail_bound\": " + fmt17(e.tail_op_bound) + ",\n";
  out += "  \"captured_mass\": " + fmt17(e.captured_mass) + ",\n";
  out += "  \"truncation\": [" + std::to_string(e.rows) + ", " + std::to_string(e.cols) + "],\n";
  out += "  \"entropy_bits\": " + fmt17(a.entropy.entropy_bits) + ",\n";
  out += "  \"unresolved_mass\": " + fmt17(a.entropy.unresolved_mass) + ",\n";
  out += "  \"singular_values\": [" + sigma_list(a, full, ", ") + "]\n";
  out += "}\n";
  return out;
}

std::string emit_text(const Analysis& a, bool full) {
  const Verdict& v = a.verdict;
  const Evidence& e = v.evidence;
  std::string out = "bipartite state analysis\n";
  out += "  truncation:      " + std::to_string(e.rows) + " x " + std::to_string(e.cols) + "\n";
  out += "  captured mass:   " + fmt17(e.captured_mass) + "\n";
  out += "  tail bound:      " + fmt17(e.tail_op_bound) + "\n";
  out += "  max |minor|:     " + fmt17(e.max_minor) + "\n";
  out += "  sigma_2 in:      [" + fmt17(e.sigma2.lo) + ", " + fmt17(e.sigma2.hi) + "]\n";
  out += "  entropy:         " + fmt17(a.entropy.entropy_bits) + " bits (unresolved mass " +
         fmtg(a.entropy.unresolved_mass) + ")\n";
  out += "  singular values: " + sigma_list(a, full, " ") + "\n";
  switch (v.kind) {
    case VerdictKind::CertifiedEntangled:
      out += "verdict: CERTIFIED ENTANGLED (sigma_2 >= " + fmt17(v.sigma2_lower) + ")\n";
      break;
    case VerdictKind::SeparableWithin:
      out += "verdict: SEPARABLE within " + fmtg(v.delta) + "\n";
      break;
    case VerdictKind::Inconclusive:
      out += "verdict: INCONCLUSIVE (" + v.reason + ")\n";
      break;
  }
  return out;
}

}  // namespace

std::string emit_report(const Analysis& analysis, ReportFormat format, bool full) {
  return format == ReportFormat::Json ? emit_json(analysis, full)
                                      : emit_text(analysis, full);
}

}  // namespace bps
