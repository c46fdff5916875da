#pragma once

#include <string>

#include "dsalign/export/dot.hpp"
#include "dsalign/export/open_exchange.hpp"
#include "dsalign/export/options.hpp"

namespace dsalign::exporter {

inline std::string export_model(const AlignmentModel& model, const ExportOptions& opts) {
  return opts.format == Format::Dot ? to_dot(model, opts) : to_open_exchange(model, opts);
}

}  // namespace dsalign::exporter
