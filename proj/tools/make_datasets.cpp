// Regenerates the bundled example tables under data/.
//
//   make_datasets <out_dir>

#include "bspcoa/io.hpp"
#include "bspcoa/simgen.hpp"

#include <filesystem>
#include <iostream>
#include <string>

namespace {

std::string table_csv(const bspcoa::FeatureMatrix &t, const std::string &note, bool integers) {
  std::string s = "# " + note + "\n";
  s += "sample_id";
  for (const auto &c : t.col_ids) s += "," + c;
  s += "\n";
  for (bspcoa::Index i = 0; i < t.rows(); ++i) {
    s += t.row_ids[static_cast<std::size_t>(i)];
    for (bspcoa::Index j = 0; j < t.cols(); ++j)
      s += "," + (integers ? std::to_string(static_cast<long long>(t.values(i, j))) : bspcoa::format_number(t.values(i, j)));
    s += "\n";
  }
  return s;
}

} // namespace

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: make_datasets <out_dir>\n";
    return 1;
  }
  const std::filesystem::path out = argv[1];
  std::filesystem::create_directories(out);

  bspcoa::Rng rng(20240601);
  bspcoa::LatentFactorSpec lf;
  bspcoa::Rng lf_rng = rng.split(1);
  const auto x = bspcoa::gen_latent_factor(lf, lf_rng);
  bspcoa::write_file(out / "latent_factor.csv",
                     table_csv(x, "two-factor model: n=50 p=10, X1 ~ V1 (var 10), X2-X4 ~ V2 (var 20), seed 20240601", false));

  bspcoa::DirMultSpec dm;
  dm.n_A = dm.n_B = 30;
  dm.p = 40;
  dm.alpha_bg = 0.5;
  bspcoa::Rng dm_rng = rng.split(2);
  const auto counts = bspcoa::gen_dirmult(dm, dm_rng);
  bspcoa::write_file(out / "two_group_counts.csv",
                     table_csv(counts.counts, "Dirichlet-multinomial two-group counts: 30+30 samples, 40 taxa, alpha 0.5, seed 20240601", true));
  std::string groups = "sample_id,group\n";
  for (std::size_t i = 0; i < counts.labels.size(); ++i)
    groups += counts.counts.row_ids[i] + "," + (counts.labels[i] ? "B" : "A") + "\n";
  bspcoa::write_file(out / "two_group_groups.csv", groups);
  std::cout << "wrote " << out / "latent_factor.csv" << ", " << out / "two_group_counts.csv" << ", "
            << out / "two_group_groups.csv" << "\n";
  return 0;
}
