// make-fixture: regenerates the committed data fixtures deterministically.
//
//   make-fixture [OUT_DIR]
//
// Writes historical_betas.csv (the synthetic historical-style beta panel the
// simulation configs consume) and sample_returns.csv (a small returns block
// for the estimate subcommand). Both are pure functions of the seeds pinned
// below, so rerunning the tool reproduces the committed files byte for byte.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mapshrink/experiments/fixture.hpp"
#include "mapshrink/experiments/io.hpp"
#include "mapshrink/model.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  mapshrink::FixtureParams params;
  params.seed = 42;
  const mapshrink::BetaPanel panel = mapshrink::make_historical_fixture(params);
  {
    std::ofstream out(out_dir / "historical_betas.csv", std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << (out_dir / "historical_betas.csv") << "\n";
      return 1;
    }
    mapshrink::write_beta_panel(out, panel);
  }
  std::cout << "wrote " << (out_dir / "historical_betas.csv").string() << " ("
            << panel.p() << " assets x " << panel.columns() << " columns)\n";

  mapshrink::GenerationParams block_params;
  block_params.p = 30;
  block_params.n = 10;
  block_params.seed = 7;
  const Eigen::VectorXd beta =
      mapshrink::generate_correlated_betas(block_params.p, 1.0, 0.5, 1.0, 7).first;
  const mapshrink::ReturnsBlock block =
      mapshrink::generate_block(block_params, beta).first;
  {
    std::ofstream out(out_dir / "sample_returns.csv", std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << (out_dir / "sample_returns.csv") << "\n";
      return 1;
    }
    for (Eigen::Index i = 0; i < block.p(); ++i) {
      for (Eigen::Index j = 0; j < block.n(); ++j) {
        out << (j == 0 ? "" : ",") << mapshrink::format_double(block.data(i, j));
      }
      out << '\n';
    }
  }
  std::cout << "wrote " << (out_dir / "sample_returns.csv").string() << " ("
            << block.p() << " x " << block.n() << ")\n";
  return 0;
}
