#include "cornergas/io.hpp"

#include "cornergas/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cornergas {

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << std::setprecision(17);
    return os;
}

constexpr std::uint32_t kMagic = 0x43475242;  // "BRGC"

Engine engine_from_name(const std::string& s)
{
    for (Engine e : {Engine::LogFft, Engine::PsiContour, Engine::PowerSeries, Engine::Interior, Engine::Scaled})
        if (s == engine_name(e)) return e;
    throw InvalidArgument("unknown engine name: " + s);
}

template <class T>
void put(std::ofstream& os, const T& v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw Error("truncated binary matrix file");
    return v;
}

}  // namespace

double FamilyConfig::param(const std::string& key, double fallback) const
{
    auto it = params.find(key);
    if (it == params.end() || it->second.empty()) return fallback;
    return it->second.front();
}

FamilyConfig parse_family_config(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("family config: ") + e.what());
    }
    FamilyConfig cfg;
    if (!j.contains("family") || !j["family"].is_string()) throw InvalidArgument("family config: missing 'family'");
    cfg.family = j["family"].get<std::string>();
    if (j.contains("N")) cfg.N = j["N"].get<int>();
    if (j.contains("params")) {
        for (const auto& [k, v] : j["params"].items()) {
            if (v.is_number())
                cfg.params[k] = {v.get<double>()};
            else if (v.is_array())
                cfg.params[k] = v.get<std::vector<double>>();
            else
                throw InvalidArgument("family config: parameter '" + k + "' must be numeric");
        }
    }
    if (cfg.N < 1) throw InvalidArgument("family config: N must be positive");
    return cfg;
}

FamilyConfig load_family_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_family_config(ss.str());
}

std::string to_json(const FamilyConfig& cfg)
{
    nlohmann::json j;
    j["family"] = cfg.family;
    j["N"] = cfg.N;
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : cfg.params) {
        if (v.size() == 1)
            j["params"][k] = v.front();
        else
            j["params"][k] = v;
    }
    return j.dump(2);
}

ExteriorMapSeries build_family(const FamilyConfig& cfg)
{
    ExteriorMapSeries map;
    const std::string& f = cfg.family;
    if (f == "disk") {
        map = build_disk();
    } else if (f == "joukowski" || f == "ellipse") {
        map = build_joukowski(cfg.param("c", 0.5));
    } else if (f == "square") {
        map = build_sc_exterior(regular_polygon_corners(4), cfg.N);
    } else if (f == "triangle") {
        map = build_sc_exterior(regular_polygon_corners(3), cfg.N);
    } else if (f == "polygon") {
        map = build_sc_exterior(regular_polygon_corners(static_cast<int>(cfg.param("m", 4))), cfg.N);
    } else if (f == "mixed" || f == "mixed-triangle") {
        map = build_sc_exterior(balanced_triangle_corners(cfg.param("alpha1", 0.1), cfg.param("alpha2", 0.4),
                                                          cfg.param("alpha3", 0.5)),
                                cfg.N);
    } else if (f == "sc") {
        auto th = cfg.params.find("theta");
        auto al = cfg.params.find("alpha");
        if (th == cfg.params.end() || al == cfg.params.end() || th->second.size() != al->second.size())
            throw InvalidArgument("sc family needs equal-length 'theta' and 'alpha' arrays");
        std::vector<CornerSpec> cs;
        for (std::size_t p = 0; p < th->second.size(); ++p) cs.push_back(CornerSpec::make(th->second[p], al->second[p]));
        map = build_sc_exterior(cs, cfg.N);
    } else {
        throw InvalidArgument("unknown family '" + f + "'");
    }
    const double r = cfg.param("r", 1.0);
    if (r != 1.0) map = build_equipotential(map, r);
    return map;
}

FamilyConfig family_from_string(const std::string& text, int N)
{
    FamilyConfig cfg;
    cfg.N = N;
    const auto colon = text.find(':');
    cfg.family = text.substr(0, colon);
    if (colon == std::string::npos) return cfg;
    const double v = std::stod(text.substr(colon + 1));
    if (cfg.family == "joukowski" || cfg.family == "ellipse")
        cfg.params["c"] = {v};
    else if (cfg.family == "polygon")
        cfg.params["m"] = {v};
    else
        throw InvalidArgument("family '" + cfg.family + "' takes no inline parameter");
    return cfg;
}

void write_boundary_csv(const std::filesystem::path& path, const BoundarySample& s)
{
    auto os = open_out(path);
    os << "theta,re_w,im_w,re_dw,im_dw\n";
    for (std::size_t j = 0; j < s.theta.size(); ++j)
        os << s.theta[j] << ',' << s.w[j].real() << ',' << s.w[j].imag() << ',' << s.dw[j].real() << ','
           << s.dw[j].imag() << '\n';
}

void write_matrix_csv(const std::filesystem::path& path, const GrunskyMatrix& B)
{
    auto os = open_out(path);
    os << "# N=" << B.N() << " rows=" << B.rows() << " cols=" << B.cols() << " engine=" << engine_name(B.engine)
       << " r1=" << B.grid.r1 << " r2=" << B.grid.r2 << " M=" << B.grid.M1 << 'x' << B.grid.M2
       << " capacity=" << B.capacity << '\n';
    os << "k,l,re_b,im_b\n";
    for (int k = 1; k <= B.rows(); ++k)
        for (int l = 1; l <= B.cols(); ++l) os << k << ',' << l << ',' << B.b(k, l).real() << ',' << B.b(k, l).imag() << '\n';
}

GrunskyMatrix read_matrix_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string());
    std::string line;
    GrunskyMatrix B;
    int rows = 0, cols = 0;
    std::vector<std::tuple<int, int, cplx>> vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "engine") B.engine = engine_from_name(val);
                else if (key == "r1") B.grid.r1 = std::stod(val);
                else if (key == "r2") B.grid.r2 = std::stod(val);
                else if (key == "capacity") B.capacity = std::stod(val);
                else if (key == "M") {
                    const auto x = val.find('x');
                    B.grid.M1 = std::stoi(val.substr(0, x));
                    if (x != std::string::npos) B.grid.M2 = std::stoi(val.substr(x + 1));
                }
            }
            continue;
        }
        if (line.rfind("k,", 0) == 0) continue;
        std::istringstream ls(line);
        int k, l;
        double re, im;
        char c;
        if (!(ls >> k >> c >> l >> c >> re >> c >> im)) throw Error("malformed matrix row: " + line);
        rows = std::max(rows, k);
        cols = std::max(cols, l);
        vals.emplace_back(k, l, cplx{re, im});
    }
    B.entries = Eigen::MatrixXcd::Zero(rows, cols);
    for (const auto& [k, l, v] : vals) B.entries(k - 1, l - 1) = v;
    return B;
}

void write_matrix_binary(const std::filesystem::path& path, const GrunskyMatrix& B)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    put(os, kMagic);
    put(os, static_cast<std::int32_t>(B.rows()));
    put(os, static_cast<std::int32_t>(B.cols()));
    put(os, static_cast<std::int32_t>(B.engine));
    put(os, B.grid.r1);
    put(os, B.grid.r2);
    put(os, static_cast<std::int32_t>(B.grid.M1));
    put(os, static_cast<std::int32_t>(B.grid.M2));
    put(os, B.capacity);
    put(os, B.accuracy);
    os.write(reinterpret_cast<const char*>(B.entries.data()),
             static_cast<std::streamsize>(sizeof(cplx) * B.entries.size()));
}

GrunskyMatrix read_matrix_binary(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    if (get<std::uint32_t>(is) != kMagic) throw Error(path.string() + " is not a Grunsky matrix dump");
    GrunskyMatrix B;
    const int rows = get<std::int32_t>(is);
    const int cols = get<std::int32_t>(is);
    B.engine = static_cast<Engine>(get<std::int32_t>(is));
    B.grid.r1 = get<double>(is);
    B.grid.r2 = get<double>(is);
    B.grid.M1 = get<std::int32_t>(is);
    B.grid.M2 = get<std::int32_t>(is);
    B.capacity = get<double>(is);
    B.accuracy = get<double>(is);
    if (rows < 0 || cols < 0) throw Error("corrupt matrix dimensions");
    B.entries.resize(rows, cols);
    is.read(reinterpret_cast<char*>(B.entries.data()), static_cast<std::streamsize>(sizeof(cplx) * B.entries.size()));
    if (!is) throw Error("truncated binary matrix file");
    return B;
}

void write_energy_csv(const std::filesystem::path& path, const EnergyReport& rep, const std::string& name)
{
    auto os = open_out(path);
    os << "n,partial\n";
    for (const auto& [n, v] : rep.truncations) os << n << ',' << v << '\n';
    os << "# " << name << " value=" << rep.value << " converged=" << (rep.converged ? "yes" : "no")
       << " tolerance=" << rep.tolerance << '\n';
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows)
{
    auto os = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
        os << '\n';
    }
}

}  // namespace cornergas
