#include "wsspec/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace wsspec {

namespace {

using nlohmann::ordered_json;

std::string bool_text(bool b) { return b ? "true" : "false"; }

// nlohmann writes NaN as null; the same is done for +-inf.
ordered_json json_number(double x) {
  if (!std::isfinite(x))
    return nullptr;
  return x == 0.0 ? 0.0 : x;
}

std::string optional_bool(const std::optional<bool> &b) {
  return b ? bool_text(*b) : "n/a";
}

std::string complex_text(cplx z) {
  return format_number(z.real()) + (z.imag() < 0.0 ? "-" : "+") +
         format_number(std::abs(z.imag())) + "i";
}

} // namespace

std::string format_number(double x) {
  if (x == 0.0)
    return "0";
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string schema_header(std::string_view schema) {
  std::string s = "# ws-spectra v";
  s += kVersion;
  s += " schema=";
  s += schema;
  return s;
}

std::vector<std::string> spectrum_columns() {
  return {"n", "eps_re", "eps_im", "E_re", "E_im", "admissible", "reason"};
}

std::vector<std::string> spectrum_fields(const EnergyLevel &level) {
  return {std::to_string(level.n),
          format_number(level.epsilon.real()),
          format_number(level.epsilon.imag()),
          format_number(level.energy.real()),
          format_number(level.energy.imag()),
          bool_text(level.admissible),
          std::string(to_string(level.reason))};
}

void write_csv_row(std::ostream &out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out << ',';
    out << fields[i];
  }
  out << '\n';
}

void write_spectrum_csv(std::ostream &out, const SpectrumReport &report) {
  out << schema_header("spectrum") << '\n';
  write_csv_row(out, spectrum_columns());
  for (const auto &level : report.levels)
    write_csv_row(out, spectrum_fields(level));
}

void write_spectrum_jsonl(std::ostream &out, const SpectrumReport &report) {
  ordered_json head;
  head["schema"] = "spectrum";
  head["version"] = kVersion;
  head["variant"] = to_string(report.variant);
  head["empty_by_amgm"] = report.empty_by_amgm;
  head["paper_level_bound"] = json_number(report.paper_level_bound);
  head["paper_bound_inconsistent"] = report.paper_bound_inconsistent;
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto &level = report.levels[i];
    ordered_json rec;
    rec["n"] = level.n;
    rec["eps_re"] = json_number(level.epsilon.real());
    rec["eps_im"] = json_number(level.epsilon.imag());
    rec["E_re"] = json_number(level.energy.real());
    rec["E_im"] = json_number(level.energy.imag());
    rec["admissible"] = level.admissible;
    rec["reason"] = to_string(level.reason);
    if (i < report.diagnostics.size()) {
      const auto &d = report.diagnostics[i];
      rec["min_branch_residual"] = json_number(min_abs(d.branch_residuals));
      if (d.paper_bound_pass)
        rec["paper_bound_pass"] = *d.paper_bound_pass;
      if (d.paper_inequality_pass)
        rec["paper_inequality_pass"] = *d.paper_inequality_pass;
      if (d.reference_epsilon) {
        rec["reference_eps_re"] = json_number(d.reference_epsilon->real());
        rec["reference_eps_im"] = json_number(d.reference_epsilon->imag());
      }
    }
    out << rec.dump() << '\n';
  }
}

void write_spectrum_text(std::ostream &out, const SpectrumReport &report) {
  out << "ws-spectra v" << kVersion << " spectrum (" << to_string(report.variant)
      << ")\n";
  out << std::left << std::setw(4) << "n" << std::setw(28) << "epsilon"
      << std::setw(28) << "E" << std::setw(12) << "admissible"
      << "reason\n";
  for (const auto &level : report.levels)
    out << std::setw(4) << level.n << std::setw(28)
        << complex_text(level.epsilon) << std::setw(28)
        << complex_text(level.energy) << std::setw(12)
        << bool_text(level.admissible) << to_string(level.reason) << '\n';
  out << "diagnostics:\n";
  for (std::size_t i = 0; i < report.diagnostics.size(); ++i) {
    const auto &d = report.diagnostics[i];
    out << "  n=" << report.levels[i].n
        << " min_branch_residual=" << format_number(min_abs(d.branch_residuals))
        << " level_bound=" << optional_bool(d.paper_bound_pass)
        << " level_inequality=" << optional_bool(d.paper_inequality_pass);
    if (d.reference_epsilon)
      out << " nu_consistent_eps=" << complex_text(*d.reference_epsilon);
    out << '\n';
  }
  if (report.variant == Variant::PTSymmetric) {
    out << "  level_bound=" << format_number(report.paper_level_bound) << '\n';
    if (report.empty_by_amgm)
      out << "  empty_by_amgm=true: the level-count inequality "
             "(b/4)^2+(beta/b)^2<beta/2 is unsatisfiable "
             "(paper inconsistency: informational)\n";
    if (report.paper_bound_inconsistent)
      out << "  level bound admits levels with epsilon<=0 "
             "(paper inconsistency: informational)\n";
  }
}

void write_wavefunction_csv(std::ostream &out,
                            std::span<const WavefunctionSample> samples) {
  out << schema_header("wavefunction") << '\n';
  out << "x,s_re,s_im,psi_re,psi_im,abs_psi\n";
  for (const auto &w : samples)
    out << format_number(w.x) << ',' << format_number(w.s.real()) << ','
        << format_number(w.s.imag()) << ',' << format_number(w.psi.real())
        << ',' << format_number(w.psi.imag()) << ','
        << format_number(std::abs(w.psi)) << '\n';
}

void write_wavefunction_jsonl(std::ostream &out,
                              std::span<const WavefunctionSample> samples) {
  ordered_json head;
  head["schema"] = "wavefunction";
  head["version"] = kVersion;
  out << head.dump() << '\n';
  for (const auto &w : samples) {
    ordered_json rec;
    rec["x"] = json_number(w.x);
    rec["s_re"] = json_number(w.s.real());
    rec["s_im"] = json_number(w.s.imag());
    rec["psi_re"] = json_number(w.psi.real());
    rec["psi_im"] = json_number(w.psi.imag());
    rec["abs_psi"] = json_number(std::abs(w.psi));
    out << rec.dump() << '\n';
  }
}

void write_divergence_csv(std::ostream &out, const DivergenceTable &table) {
  out << schema_header("divergence") << '\n';
  out << "# " << table.label << '\n';
  out << "n,closed_form,oracle,abs_dev,rel_dev,within_tolerance\n";
  for (const auto &r : table.rows)
    out << r.n << ',' << format_number(r.closed_form) << ','
        << (r.oracle ? format_number(*r.oracle) : "") << ','
        << format_number(r.abs_deviation) << ','
        << format_number(r.rel_deviation) << ','
        << bool_text(r.within_tolerance) << '\n';
}

void write_divergence_text(std::ostream &out, const DivergenceTable &table) {
  out << table.label << '\n';
  out << std::left << std::setw(4) << "n" << std::setw(24) << "closed_form"
      << std::setw(24) << "oracle" << std::setw(24) << "rel_dev"
      << "within_tol\n";
  for (const auto &r : table.rows)
    out << std::setw(4) << r.n << std::setw(24) << format_number(r.closed_form)
        << std::setw(24) << (r.oracle ? format_number(*r.oracle) : "-")
        << std::setw(24) << format_number(r.rel_deviation)
        << bool_text(r.within_tolerance) << '\n';
}

void write_convergence_csv(std::ostream &out, const ConvergenceResult &result) {
  out << schema_header("convergence") << '\n';
  out << "# order=" << format_number(result.order)
      << " limit=" << format_number(result.limit) << '\n';
  out << "h,E,error\n";
  for (std::size_t i = 0; i < result.spacings.size(); ++i)
    out << format_number(result.spacings[i]) << ','
        << format_number(result.values[i]) << ','
        << format_number(i < result.errors.size() ? result.errors[i] : NAN)
        << '\n';
}

void write_convergence_text(std::ostream &out,
                            const ConvergenceResult &result) {
  out << "convergence: observed order " << format_number(result.order)
      << ", extrapolated limit " << format_number(result.limit) << '\n';
  for (std::size_t i = 0; i < result.spacings.size(); ++i)
    out << "  h=" << format_number(result.spacings[i])
        << " E=" << format_number(result.values[i]) << '\n';
}

} // namespace wsspec
