#include "orgnorms/landscape_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace orgnorms {

namespace {

constexpr std::array<char, 8> kMagic{'O', 'R', 'G', 'N', 'L', 'S', 'C', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (std::size_t k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffU);
  out.write(b.data(), b.size());
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (std::size_t k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffU);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw std::runtime_error("landscape file truncated");
  }
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= std::uint64_t{b[k]} << (8 * k);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw std::runtime_error("landscape file truncated");
  }
  std::uint32_t v = 0;
  for (std::size_t k = 0; k < 4; ++k) v |= std::uint32_t{b[k]} << (8 * k);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void save_landscape(const Landscape& lsc, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  const auto& c = lsc.structure().coupling();
  for (int v : {lsc.N(), lsc.P(), c.K, c.C, c.S}) put_u32(out, static_cast<std::uint32_t>(v));
  put_f64(out, lsc.rho());
  put_u64(out, lsc.seed());
  put_u64(out, lsc.configs_per_task());
  for (double v : lsc.tables()) put_f64(out, v);
  put_f64(out, lsc.global_max());
  put_u32(out, lsc.argmax_state().bits());
  if (!out) throw std::runtime_error("failed to write landscape");
}

Landscape load_landscape(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a landscape file (bad magic)");
  }
  std::array<int, 5> dims{};
  for (int& d : dims) d = static_cast<int>(get_u32(in));
  const auto [N, P, K, C, S] = dims;
  InteractionStructure structure = build_structure(N, P, {K, C, S});
  const double rho = get_f64(in);
  const Seed seed = get_u64(in);
  const std::uint64_t configs = get_u64(in);
  if (configs != (std::uint64_t{1} << (1 + structure.degree()))) {
    throw std::runtime_error("landscape file: table size does not match coupling");
  }
  std::vector<double> tables(configs * static_cast<std::uint64_t>(structure.M()));
  for (double& v : tables) v = get_f64(in);
  const double stored_max = get_f64(in);
  const std::uint32_t stored_argmax = get_u32(in);

  Landscape lsc(std::move(structure), rho, seed, std::move(tables));
  if (std::bit_cast<std::uint64_t>(lsc.global_max()) != std::bit_cast<std::uint64_t>(stored_max) ||
      lsc.argmax_state().bits() != stored_argmax) {
    throw std::runtime_error("landscape file: stored global maximum does not match its tables");
  }
  return lsc;
}

void save_landscape(const Landscape& lsc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_landscape(lsc, out);
}

Landscape load_landscape(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_landscape(in);
}

}  // namespace orgnorms
