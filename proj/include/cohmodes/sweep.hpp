#pragma once

// Deterministic parameter sweeps with CSV/JSON emission.  Rows are computed
// by a bounded worker pool but always assembled (and emitted) in grid order,
// so the output is byte-identical regardless of worker count.

#include <atomic>
#include <charconv>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace cohmodes {

struct SweepSpec {
    std::string name; // mu | lambda | T | t
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    double point(int i) const
    {
        if (count < 2)
            throw invalid_params_error("sweep count must be at least 2");
        return start + (stop - start) * i / (count - 1);
    }
};

// Parse "name:start:stop:count".
inline SweepSpec parse_sweep(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':'))
        parts.push_back(tok);
    if (parts.size() != 4)
        throw invalid_params_error("sweep must be name:start:stop:count, got '" +
                                   text + "'");
    SweepSpec spec;
    spec.name = parts[0];
    if (spec.name != "mu" && spec.name != "lambda" && spec.name != "T" &&
        spec.name != "t")
        throw invalid_params_error("sweep parameter must be one of "
                                   "mu|lambda|T|t, got '" +
                                   spec.name + "'");
    try {
        spec.start = std::stod(parts[1]);
        spec.stop = std::stod(parts[2]);
        spec.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw invalid_params_error("malformed sweep range in '" + text + "'");
    }
    if (spec.count < 2)
        throw invalid_params_error("sweep count must be at least 2");
    return spec;
}

// 12 significant digits, locale-independent.
inline std::string format_value(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

struct SweepRow {
    std::vector<double> values;     // one entry per column
    std::optional<std::string> err; // set if this grid point failed
};

// Evaluate fn over [0, count) with a bounded worker pool; results land in
// input order.  fn must be thread-safe (the library's compute routines are
// pure functions).
inline std::vector<SweepRow>
run_sweep(int count, const std::function<SweepRow(int)>& fn)
{
    std::vector<SweepRow> rows(static_cast<size_t>(count));
    const unsigned pool =
        std::min(std::max(std::thread::hardware_concurrency(), 1u), 8u);

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                rows[static_cast<size_t>(i)] = fn(i);
            } catch (const error& e) {
                rows[static_cast<size_t>(i)].err = e.what();
            }
        }
    };

    std::vector<std::thread> threads;
    for (unsigned k = 0; k + 1 < pool; ++k)
        threads.emplace_back(worker);
    worker();
    for (auto& t : threads)
        t.join();
    return rows;
}

// CSV: one '#' comment line carrying the full flag set, then an RFC-4180
// header + data rows.  Failed points become '# error' comment rows so they
// are reported, never silently skipped.
inline bool write_csv(std::ostream& os, const std::string& flags,
                      const std::vector<std::string>& columns,
                      const std::vector<SweepRow>& rows)
{
    os << "# " << flags << "\n";
    for (size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? "," : "");
    os << "\n";
    bool ok = true;
    for (const auto& row : rows) {
        if (row.err) {
            os << "# error: " << *row.err << "\n";
            ok = false;
            continue;
        }
        for (size_t c = 0; c < row.values.size(); ++c)
            os << format_value(row.values[c])
               << (c + 1 < row.values.size() ? "," : "");
        os << "\n";
    }
    return ok;
}

inline bool write_json(std::ostream& os, const std::string& flags,
                       const std::vector<std::string>& columns,
                       const std::vector<SweepRow>& rows)
{
    nlohmann::ordered_json doc;
    doc["flags"] = flags;
    doc["columns"] = columns;
    doc["rows"] = nlohmann::json::array();
    doc["errors"] = nlohmann::json::array();
    bool ok = true;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].err) {
            doc["errors"].push_back(
                {{"index", i}, {"message", *rows[i].err}});
            ok = false;
            continue;
        }
        nlohmann::ordered_json row = nlohmann::json::array();
        // serialize through the same 12-digit formatter as CSV so both
        // formats are bit-for-bit reproducible
        for (double v : rows[i].values)
            row.push_back(format_value(v));
        doc["rows"].push_back(row);
    }
    os << doc.dump(2) << "\n";
    return ok;
}

} // namespace cohmodes
