#ifndef WSSPEC_REPORT_IO_HPP
#define WSSPEC_REPORT_IO_HPP

#include "wsspec/eigenfunctions.hpp"
#include "wsspec/spectra.hpp"
#include "wsspec/verifier.hpp"

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsspec {

inline constexpr std::string_view kVersion = WSSPEC_VERSION_STRING;

/// Shortest round-trip decimal form; "0" for both signed zeros.
std::string format_number(double x);

/// `# ws-spectra v<version> schema=<name>`
std::string schema_header(std::string_view schema);

std::vector<std::string> spectrum_columns();
/// One record in spectrum_columns() order.
std::vector<std::string> spectrum_fields(const EnergyLevel &level);

void write_csv_row(std::ostream &out, std::span<const std::string> fields);

void write_spectrum_csv(std::ostream &out, const SpectrumReport &report);
/// First line is a schema record, then one JSON object per level.
void write_spectrum_jsonl(std::ostream &out, const SpectrumReport &report);
/// Table plus the per-level and spectrum-wide diagnostics.
void write_spectrum_text(std::ostream &out, const SpectrumReport &report);

void write_wavefunction_csv(std::ostream &out,
                            std::span<const WavefunctionSample> samples);
void write_wavefunction_jsonl(std::ostream &out,
                              std::span<const WavefunctionSample> samples);

void write_divergence_csv(std::ostream &out, const DivergenceTable &table);
void write_divergence_text(std::ostream &out, const DivergenceTable &table);

void write_convergence_csv(std::ostream &out, const ConvergenceResult &result);
void write_convergence_text(std::ostream &out, const ConvergenceResult &result);

} // namespace wsspec

#endif
