#include "qlens/tdse/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "qlens/errors.hpp"

namespace qlens::tdse {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("read_snapshot: truncated file");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ComplexField2D& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_snapshot: cannot open " + path.string());
  const GridSpec& g = field.grid();
  put<std::uint64_t>(os, g.n1);
  put<std::uint64_t>(os, g.n2);
  put(os, g.x1_min);
  put(os, g.x1_max);
  put(os, g.x2_min);
  put(os, g.x2_max);
  os.write(reinterpret_cast<const char*>(field.data()),
           static_cast<std::streamsize>(g.size() * sizeof(cplx)));
  if (!os) throw Error("write_snapshot: write failed for " + path.string());
}

ComplexField2D read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_snapshot: cannot open " + path.string());
  GridSpec g;
  g.n1 = get<std::uint64_t>(is);
  g.n2 = get<std::uint64_t>(is);
  g.x1_min = get<double>(is);
  g.x1_max = get<double>(is);
  g.x2_min = get<double>(is);
  g.x2_max = get<double>(is);
  g.validate();
  ComplexField2D field(g);
  is.read(reinterpret_cast<char*>(field.data()),
          static_cast<std::streamsize>(g.size() * sizeof(cplx)));
  if (!is) throw Error("read_snapshot: truncated payload in " + path.string());
  return field;
}

void write_snapshot_with_sidecar(const std::filesystem::path& path, const ComplexField2D& field,
                                 double t, const std::string& engine, double v0) {
  write_snapshot(path, field);
  const GridSpec& g = field.grid();
  nlohmann::ordered_json j;
  j["format"] = "qlens-snapshot";
  j["layout"] = "u64 n1, u64 n2, f64 x1_min x1_max x2_min x2_max, complex f64 pairs, q1 fastest";
  j["endianness"] = "little";
  j["n1"] = g.n1;
  j["n2"] = g.n2;
  j["extents"] = {g.x1_min, g.x1_max, g.x2_min, g.x2_max};
  j["t"] = t;
  j["engine"] = engine;
  j["v0"] = v0;
  std::ofstream os(path.string() + ".json");
  if (!os) throw Error("write_snapshot: cannot open sidecar for " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace qlens::tdse
