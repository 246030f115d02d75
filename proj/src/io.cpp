#include "expou/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace expou {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const MetaList& meta,
               const std::vector<std::string>& columns,
               const std::vector<const std::vector<double>*>& data) {
    if (columns.size() != data.size())
        throw std::invalid_argument("write_csv: column/data mismatch");
    std::size_t rows = data.empty() ? 0 : data[0]->size();
    for (const auto* col : data)
        if (col->size() != rows)
            throw std::invalid_argument("write_csv: ragged columns");

    for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << fmt_g17((*data[c])[r]);
        out << "\n";
    }
}

std::string params_to_json(const ModelParams& p) {
    nlohmann::ordered_json j;
    j["s0"] = p.s0;
    j["mu"] = p.mu;
    j["m"] = p.m;
    j["y0"] = p.y0;
    j["alpha"] = p.alpha;
    j["gamma"] = p.gamma;
    j["k"] = p.k;
    j["rho"] = p.rho;
    return j.dump();
}

RawParams params_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("params_from_json_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object())
        throw std::runtime_error("params_from_json_file: expected an object");

    RawParams p;
    auto get = [&](const char* key, double& slot) {
        if (auto it = j.find(key); it != j.end()) slot = it->get<double>();
    };
    get("s0", p.s0);
    get("mu", p.mu);
    get("m", p.m);
    get("y0", p.y0);
    get("alpha", p.alpha);
    get("gamma", p.gamma);
    get("k", p.k);
    get("rho", p.rho);
    for (auto& [key, _] : j.items()) {
        static const char* known[] = {"s0", "mu", "m",  "y0",
                                      "alpha", "gamma", "k", "rho"};
        bool ok = false;
        for (const char* kk : known) ok = ok || key == kk;
        if (!ok)
            throw std::runtime_error("params_from_json_file: unknown key '" +
                                     key + "'");
    }
    return p;
}

}  // namespace expou
