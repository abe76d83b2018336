#pragma once

#include "cornergas/conformal.hpp"
#include "cornergas/fredholm.hpp"
#include "cornergas/grunsky.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cornergas {

/// A named domain family with numeric parameters and a truncation N.
/// Families: disk, joukowski {c}, polygon {m}, mixed-triangle {alpha1, alpha2, alpha3},
/// sc {theta_p..., alpha_p...} given as arrays, equipotential {r} on top of a base.
struct FamilyConfig {
    std::string family;
    std::map<std::string, std::vector<double>> params;
    int N = 256;

    double param(const std::string& key, double fallback) const;
};

FamilyConfig parse_family_config(const std::string& json_text);
FamilyConfig load_family_config(const std::filesystem::path& path);
std::string to_json(const FamilyConfig& cfg);

/// Builds the exterior map described by the config.
ExteriorMapSeries build_family(const FamilyConfig& cfg);
/// Shorthand: "disk", "joukowski:0.5", "square", "triangle", "polygon:5", "mixed".
FamilyConfig family_from_string(const std::string& text, int N);

void write_boundary_csv(const std::filesystem::path& path, const BoundarySample& s);
void write_matrix_csv(const std::filesystem::path& path, const GrunskyMatrix& B);
GrunskyMatrix read_matrix_csv(const std::filesystem::path& path);
/// Little-endian binary: magic, rows, cols, engine, r1, r2, M1, M2, entries (column major).
void write_matrix_binary(const std::filesystem::path& path, const GrunskyMatrix& B);
GrunskyMatrix read_matrix_binary(const std::filesystem::path& path);
void write_energy_csv(const std::filesystem::path& path, const EnergyReport& rep, const std::string& name);

/// Generic table writer: header row then numeric rows at full precision.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace cornergas
