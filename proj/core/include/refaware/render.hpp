#pragma once

#include <string>

#include "refaware/report.hpp"

namespace refaware {

// Plain-text tables: refactorings per pair, then per-kind DCC and distance
// statistics.
std::string render_table(const AnalysisReport& report);

// Self-contained static HTML page (no scripts) for archiving a report.
std::string render_html(const AnalysisReport& report);

}  // namespace refaware
