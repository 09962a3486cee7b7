#pragma once

// CSV emission and the reproducible-run manifest.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaitlab/common.hpp"

namespace gaitlab {

using Json = nlohmann::json;

// Fixed formatting so identical runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : path_(path), out_(path + ".tmp") {
        if (!out_) throw Error("cannot open " + path + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out_ << (i ? "," : "") << format_double(vals[i]);
        out_ << "\n";
    }

    void close() {
        if (closed_) return;
        out_.close();
        std::filesystem::rename(path_ + ".tmp", path_);
        closed_ = true;
    }

    ~CsvWriter() {
        try {
            close();
        } catch (...) {
        }
    }

  private:
    std::string path_;
    std::ofstream out_;
    bool closed_ = false;
};

struct RunManifest {
    std::string subcommand;
    Json params;  // fully resolved parameter set
    std::vector<std::string> outputs;
    double wall_ms = 0;
    unsigned seed = 12345;

    Json to_json() const {
        return Json{{"tool", "gaitlab"},   {"version", kVersion}, {"subcommand", subcommand},
                    {"params", params},    {"outputs", outputs},  {"wall_ms", wall_ms},
                    {"seed", seed}};
    }

    // Written atomically next to the outputs.
    void write(const std::string& dir) const {
        std::filesystem::create_directories(dir);
        std::string path = dir + "/manifest.json";
        std::ofstream out(path + ".tmp");
        if (!out) throw Error("cannot write " + path);
        out << to_json().dump(2) << "\n";
        out.close();
        std::filesystem::rename(path + ".tmp", path);
    }

    static RunManifest read(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open manifest " + path);
        Json j = Json::parse(in);
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.params = j.at("params");
        if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("seed")) m.seed = j.at("seed").get<unsigned>();
        return m;
    }
};

inline void write_json_atomic(const std::string& path, const Json& j) {
    std::ofstream out(path + ".tmp");
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
    out.close();
    std::filesystem::rename(path + ".tmp", path);
}

}  // namespace gaitlab
