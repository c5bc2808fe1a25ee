#include <bit>

#include "hamsim/tilelab.hpp"

namespace hamsim {

DecodedStack decode_layers(const TileStack& st) {
  if (st.configs.size() != st.layers.size())
    throw Error(Error::Kind::structural, "layers inconsistent: config count differs from layer count");
  for (const auto& c : st.configs)
    if (c.W != st.W || c.H != st.H) throw Error(Error::Kind::structural, "layers inconsistent: size mismatch");
  const int hi = st.find("height"), wi = st.find("width");
  if (hi < 0 || wi < 0) throw Error(Error::Kind::structural, "stack lacks the height/width counter layers");

  DecodedStack d;
  for (std::size_t i = 0; i < st.layers.size(); ++i) {
    Half e = layer_energy_half(st, i);
    Half want = (static_cast<int>(i) == hi || static_cast<int>(i) == wi) ? -1 : 0;
    if (e != want)
      d.issues.push_back("layer " + st.layers[i].name + " has energy " + std::to_string(from_half(e)) +
                         ", ground value is " + std::to_string(from_half(want)));
  }

  const TileConfig& hc = st.configs[hi];
  const TileConfig& wc = st.configs[wi];
  d.H_bits = counter_bits(hc, st.H - 1, false);
  d.W_bits = counter_bits(wc, 0, true);
  d.H_value = bits_value(d.H_bits);
  d.W_value = bits_value(d.W_bits);
  // bottom row / left column hold the lattice size minus the boundary row / column
  d.lattice_H = static_cast<int>(d.H_value) + 1;
  d.lattice_W = static_cast<int>(d.W_value) + 1;
  if (d.lattice_H != st.H) d.issues.push_back("height counter decodes to " + std::to_string(d.lattice_H));
  if (d.lattice_W != st.W) d.issues.push_back("width counter decodes to " + std::to_string(d.lattice_W));
  if (std::popcount(d.W_value) == 2) {
    d.n = std::countr_zero(d.W_value);
    d.b = 63 - std::countl_zero(d.W_value);
  } else {
    d.issues.push_back("width value " + std::to_string(d.W_value) + " is not of the form 2^n + 2^b");
  }

  if (int t = st.find("triangle"); t >= 0) {
    const TileConfig& c = st.configs[t];
    for (int y = 0; y < st.H; ++y)
      for (int x = 0; x < st.W; ++x)
        if (c.xy(x, y) == 2 || c.xy(x, y) == 5) d.triangle.push_back({x, y});
  }
  if (int s = st.find("square.mark"); s >= 0) {
    const TileConfig& c = st.configs[s];
    for (int y = 0; y < st.H; ++y)
      for (int x = 0; x < st.W; ++x)
        if (c.xy(x, y) == 0) d.square.push_back({x, y});
  }
  d.valid = d.issues.empty();
  return d;
}

}  // namespace hamsim
