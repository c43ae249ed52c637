#include "sqglab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <atomic>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace sqglab {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: missing '=' at " + path + ":" +
                                     std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!val.empty() && val.front() == '"' && val.back() == '"' && val.size() >= 2)
            val = val.substr(1, val.size() - 2);
        if (key.empty())
            throw std::runtime_error("config: empty key at " + path + ":" +
                                     std::to_string(lineno));
        kv_[key] = val;
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_num(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config: bad number for " + key);
    return v;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return std::stoi(it->second);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        std::fprintf(f, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::fprintf(f, "%.17g%s", row[i], i + 1 < row.size() ? "," : "\n");
    }
    std::fclose(f);
}

void write_meta(const std::string& out_path, const RunConfig& config,
                const std::map<std::string, std::string>& extra,
                double wall_seconds) {
    nlohmann::json j;
    j["config"] = config.entries();
    j["extra"] = extra;
    j["wall_seconds"] = wall_seconds;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("write_meta: cannot open " + out_path);
    out << j.dump(2) << "\n";
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, bool log_y) {
    const int W = 760, H = 460, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    for (const auto& s : series)
        for (double v : s) {
            const double t = log_y ? (v > 0 ? std::log10(v) : -300.0) : v;
            if (t <= -250) continue;
            ymin = std::min(ymin, t);
            ymax = std::max(ymax, t);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const auto px = [&](double v) {
        return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
    };
    const auto py = [&](double v) {
        const double t = log_y ? (v > 0 ? std::log10(v) : ymin) : v;
        return H - mb - (t - ymin) / (ymax - ymin) * (H - mt - mb);
    };
    static const char* colors[] = {"#1b6ca8", "#c0392b", "#27813e", "#8e44ad"};
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_svg_lines: cannot open " + path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>"
      << title << "</text>\n";
    f << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='"
      << H - mb << "' stroke='black'/>\n";
    f << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
      << "' stroke='black'/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        f << "<polyline fill='none' stroke='" << colors[s % 4]
          << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < x.size() && i < series[s].size(); ++i)
            f << px(x[i]) << "," << py(series[s][i]) << " ";
        f << "'/>\n";
        if (s < labels.size())
            f << "<text x='" << W - mr - 160 << "' y='" << mt + 18 * (s + 1)
              << "' fill='" << colors[s % 4] << "' font-size='12'>" << labels[s]
              << "</text>\n";
    }
    f << "</svg>\n";
}

int thread_budget() {
    if (const char* env = std::getenv("SQGLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int nt = std::min(thread_budget(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace sqglab
