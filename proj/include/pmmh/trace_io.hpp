#ifndef PMMH_TRACE_IO_HPP
#define PMMH_TRACE_IO_HPP

#include <filesystem>

#include "pmmh/sampler.hpp"

namespace pmmh {

// One CSV row per iteration: named constrained-scale parameters, the stored
// log estimate, and the accept flag; run metadata goes to a JSON sidecar.
void write_trace(const std::filesystem::path& csv_path, const Trace& trace);
void write_trace_meta(const std::filesystem::path& meta_path, const Trace& trace);

// Reads the CSV (and the sidecar when given) back into a Trace.
Trace read_trace(const std::filesystem::path& csv_path,
                 const std::filesystem::path& meta_path = {});

}  // namespace pmmh

#endif
