#include "betamix/io.hpp"

#include <fstream>
#include <stdexcept>

namespace betamix {

namespace {

// Field access problems are schema (parse-class) errors; domain invariants
// keep throwing std::invalid_argument from the constructors.
[[noreturn]] void schema_error(const std::string& what) {
    throw std::runtime_error("schema error: " + what);
}

}  // namespace

GroundSpace ground_space_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dimension") || !j.contains("sites"))
        schema_error("ground space JSON needs 'dimension' and 'sites'");
    int dim = 0;
    std::vector<Site> sites;
    try {
        dim = j.at("dimension").get<int>();
        for (const auto& sj : j.at("sites")) {
            Site s;
            s.coord = sj.at("coord").get<std::vector<double>>();
            s.weight = sj.value("weight", 1.0);
            sites.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        schema_error(e.what());
    }
    return GroundSpace(dim, std::move(sites));
}

nlohmann::json ground_space_to_json(const GroundSpace& space) {
    nlohmann::json sites = nlohmann::json::array();
    for (const Site& s : space.sites())
        sites.push_back({{"coord", s.coord}, {"weight", s.weight}});
    return {{"dimension", space.dimension()}, {"sites", std::move(sites)}};
}

DiscreteDPP dpp_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("space") || !j.contains("matrix"))
        schema_error("kernel JSON needs 'space' and 'matrix'");
    GroundSpace space = ground_space_from_json(j.at("space"));
    const auto& rows = j.at("matrix");
    const int n = space.size();
    if (static_cast<int>(rows.size()) != n)
        schema_error("kernel matrix row count differs from site count");
    Eigen::MatrixXd kernel(n, n);
    try {
        for (int r = 0; r < n; ++r) {
            const auto& row = rows.at(static_cast<std::size_t>(r));
            if (static_cast<int>(row.size()) != n)
                schema_error("kernel matrix must be square");
            for (int c = 0; c < n; ++c)
                kernel(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        schema_error(e.what());
    }
    return DiscreteDPP(std::move(space), std::move(kernel));
}

nlohmann::json dpp_to_json(const DiscreteDPP& dpp) {
    const int n = dpp.space().size();
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < n; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < n; ++c) row.push_back(dpp.kernel()(r, c));
        rows.push_back(std::move(row));
    }
    return {{"space", ground_space_to_json(dpp.space())}, {"matrix", std::move(rows)}};
}

FiniteProcess process_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("space") || !j.contains("law"))
        schema_error("law JSON needs 'space' and 'law'");
    GroundSpace space = ground_space_from_json(j.at("space"));
    std::vector<double> law(std::size_t{1} << space.size(), 0.0);
    try {
        for (const auto& entry : j.at("law")) {
            const auto indices = entry.at("config").get<std::vector<int>>();
            const Config c = Config::from_indices(indices);
            require_valid(space, c);
            law[c.mask()] += entry.at("p").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        schema_error(e.what());
    }
    return FiniteProcess(std::move(space), std::move(law));
}

nlohmann::json process_to_json(const FiniteProcess& process) {
    nlohmann::json entries = nlohmann::json::array();
    for (const Config c :
         enumerate_subsets(process.space(), SiteSet::full(process.space().size()))) {
        const double p = process.prob(c);
        if (p != 0.0) entries.push_back({{"config", c.members()}, {"p", p}});
    }
    return {{"space", ground_space_to_json(process.space())},
            {"law", std::move(entries)}};
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("parse error in '" + path + "': " + e.what());
    }
}

}  // namespace betamix
