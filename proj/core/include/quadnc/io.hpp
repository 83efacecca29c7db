#ifndef QUADNC_IO_HPP
#define QUADNC_IO_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "quadnc/features.hpp"
#include "quadnc/sampler.hpp"

namespace quadnc {

// Round-trip-exact decimal text for a double (17 significant digits).
std::string format17(double v);

// Strict full-token parses; `where` names the offending location.
double parse_double(const std::string& token, const std::string& where);
std::uint64_t parse_u64(const std::string& token, const std::string& where);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Event file: one header line `phi=... seed=... family=... ...params`,
// then one quadrature value per line.
void save_events(const QuadratureBatch& batch, const std::string& path);
QuadratureBatch load_events(const std::string& path);

// CSV row for a histogram: 160 bin frequencies, then kept and dropped.
std::string feature_csv_row(const FeatureVector& f);
FeatureVector feature_from_csv_row(const std::string& line, const std::string& where);

// Splits one CSV line on commas (no quoting — none of our fields need it).
std::vector<std::string> split_csv(const std::string& line);

// Runs fn(i) for i in [0, count) over `jobs` threads in contiguous chunks.
// Caller writes results into index-addressed slots, so the outcome does not
// depend on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace quadnc

#endif
