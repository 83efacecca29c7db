#include "quadnc/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "quadnc/errors.hpp"
#include "quadnc/states.hpp"

namespace quadnc {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const std::string& where) {
    if (token.empty())
        throw FormatError(where + ": empty number field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        throw FormatError(where + ": '" + token + "' is not a valid number");
    return v;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad())
        throw IoError("read failure on '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f)
        throw IoError("short write to '" + path + "'");
}

std::uint64_t parse_u64(const std::string& token, const std::string& where) {
    if (token.empty())
        throw FormatError(where + ": empty integer field");
    // strtoull silently wraps negative input, so insist on digits only.
    if (token.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError(where + ": '" + token + "' is not a valid integer");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        throw FormatError(where + ": '" + token + "' is not a valid integer");
    return static_cast<std::uint64_t>(v);
}

void save_events(const QuadratureBatch& batch, const std::string& path) {
    std::string out;
    out.reserve(batch.values.size() * 24 + 128);
    out += "phi=" + format17(batch.phi);
    out += batch.seed ? " seed=" + std::to_string(*batch.seed) : " seed=none";
    if (batch.spec) {
        const StateSpec& s = *batch.spec;
        out += " family=" + std::string(family_name(s.family));
        out += " alpha=" + format17(s.alpha);
        out += " nbar=" + format17(s.nbar);
        out += " n=" + std::to_string(s.n);
        out += " xi=" + format17(s.xi);
        out += " eta=" + format17(s.eta);
    } else {
        out += " family=none";
    }
    out += "\n";
    for (double v : batch.values) {
        out += format17(v);
        out += "\n";
    }
    write_text_file(path, out);
}

QuadratureBatch load_events(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw FormatError("'" + path + "' has no header line");

    QuadratureBatch batch;
    bool saw_phi = false;
    std::string family_tag = "none";
    double alpha = 0.0, nbar = 0.0, xi = 0.0, eta = 1.0;
    int n = 0;

    std::istringstream fields(header);
    std::string field;
    while (fields >> field) {
        const std::size_t eq = field.find('=');
        if (eq == std::string::npos)
            throw FormatError("'" + path + "' header: expected key=value, got '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string val = field.substr(eq + 1);
        const std::string where = path + " header field " + key;
        if (key == "phi") {
            batch.phi = parse_double(val, where);
            saw_phi = true;
        } else if (key == "seed") {
            if (val != "none")
                batch.seed = parse_u64(val, where);
        } else if (key == "family") {
            family_tag = val;
        } else if (key == "alpha") {
            alpha = parse_double(val, where);
        } else if (key == "nbar") {
            nbar = parse_double(val, where);
        } else if (key == "n") {
            n = static_cast<int>(parse_u64(val, where));
        } else if (key == "xi") {
            xi = parse_double(val, where);
        } else {
            if (key == "eta")
                eta = parse_double(val, where);
            else
                throw FormatError("'" + path + "' header: unknown key '" + key + "'");
        }
    }
    if (!saw_phi)
        throw FormatError("'" + path + "' header is missing phi");
    if (family_tag != "none") {
        StateSpec spec;
        spec.family = family_from_name(family_tag);
        spec.alpha = alpha;
        spec.nbar = nbar;
        spec.n = n;
        spec.xi = xi;
        spec.eta = eta;
        spec.phi = batch.phi;
        validate(spec);
        batch.spec = spec;
    }

    std::string line;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        batch.values.push_back(
            parse_double(line, path + " line " + std::to_string(line_no)));
    }
    return batch;
}

std::string feature_csv_row(const FeatureVector& f) {
    std::string out;
    out.reserve(kNumBins * 24 + 32);
    for (double b : f.bins) {
        out += format17(b);
        out += ",";
    }
    out += std::to_string(f.kept);
    out += ",";
    out += std::to_string(f.dropped);
    return out;
}

FeatureVector feature_from_csv_row(const std::string& line, const std::string& where) {
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != static_cast<std::size_t>(kNumBins) + 2)
        throw FormatError(where + ": expected " + std::to_string(kNumBins + 2) +
                          " columns, got " + std::to_string(cells.size()));
    FeatureVector f;
    for (int i = 0; i < kNumBins; ++i)
        f.bins[static_cast<std::size_t>(i)] =
            parse_double(cells[static_cast<std::size_t>(i)], where);
    f.kept = static_cast<std::int64_t>(parse_u64(cells[kNumBins], where));
    f.dropped = static_cast<std::int64_t>(parse_u64(cells[kNumBins + 1], where));
    return f;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    const std::size_t nthreads =
        jobs <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    if (nthreads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = count * t / nthreads;
        const std::size_t hi = count * (t + 1) / nthreads;
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool)
        th.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace quadnc
