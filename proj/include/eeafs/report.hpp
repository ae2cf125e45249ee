#ifndef EEAFS_REPORT_HPP
#define EEAFS_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eeafs/batch.hpp"
#include "eeafs/scenario.hpp"
#include "eeafs/simulation.hpp"

namespace eeafs {

// Header: t, then h,y,r,e,ind per loop, alpha, E, J per loop, J_SUM, misses.
std::string trace_header(std::size_t loops);

// Comma-separated, shortest round-trip representation of every double.
void write_trace(std::ostream& out, std::span<const TraceRecord> trace);
std::vector<TraceRecord> parse_trace(std::istream& in);

void emit_trace(const std::filesystem::path& path, std::span<const TraceRecord> trace);

std::string format_summary(const RunSummary& s);

// Markdown table for a sweep. Decreases are percentage points of normalized
// energy against the opDVS row; increases are relative J_SUM changes.
std::string format_sweep_report(const Sweep& sweep, std::span<const RunSummary> results);

void emit_text(const std::filesystem::path& path, const std::string& text);

void write_surface(std::ostream& out, std::span<const SurfacePoint> points);
void emit_surface(const std::filesystem::path& path, std::span<const SurfacePoint> points);

} // namespace eeafs

#endif
