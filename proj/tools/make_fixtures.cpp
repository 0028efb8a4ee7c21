// Regenerates tests/fixtures/oracle_fixtures.json from the finite-difference oracle.
// Usage: make_fixtures OUT.json
#include <fstream>
#include <iostream>

#include "soilab/oracle.hpp"

using namespace soilab;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUT.json\n";
    return 2;
  }
  const oracle::RadialGrid grid{2048, 6.0};
  std::vector<oracle::FixtureRecord> records;
  const auto step = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01);
  for (int m : {0, 1, 2}) records.push_back(oracle::make_fixture(step, m, 1, grid));
  const auto smooth = WaveguideSpec::from_v(ParticleKind::electron(), 5.0, 0.01, RadialProfile::smoothed_step(0.05));
  for (int m : {1, -1, 2}) {
    for (int sigma : {1, -1}) records.push_back(oracle::make_fixture(smooth, m, sigma, grid));
  }
  std::ofstream(argv[1]) << oracle::to_json(records) << "\n";
  return 0;
}
