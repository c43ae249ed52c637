#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sqglab {

/// Flat key = value configuration (TOML-style scalars only, # comments).
/// CLI flags override file entries; the merged map is serialized next to
/// every output for provenance.
class RunConfig {
  public:
    void load_file(const std::string& path);        // throws on parse errors
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_num(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

/// Writes one CSV file with a fixed-order header; values are printed with
/// %.17g so identical runs are bit-identical.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// meta.json: merged config, tolerances, wall time, outputs.
void write_meta(const std::string& out_path, const RunConfig& config,
                const std::map<std::string, std::string>& extra,
                double wall_seconds);

/// Minimal self-contained SVG line chart (x vs several y series).
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, bool log_y = false);

/// Parallelism cap: SQGLAB_THREADS, defaulting to the hardware count.
int thread_budget();

/// Fixed-order parallel map over [0, n): results land by index, so output
/// bytes do not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace sqglab
