// Regenerates the bundled mini corpus: one ARFF per synthetic spec plus a
// manifest listing them.

#include <filesystem>
#include <iostream>
#include <string>

#include "metaprep/arff.hpp"
#include "metaprep/openml.hpp"
#include "metaprep/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_mini_corpus <data-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir / "mini_corpus");
  std::string manifest = "# Bundled synthetic datasets (regenerate with make_mini_corpus)\n";
  for (const auto& spec : metaprep::mini_corpus_specs()) {
    const auto ds = metaprep::make_synthetic(spec);
    const std::string file = "mini_corpus/" + spec.name + ".arff";
    metaprep::write_file_atomic(dir / file, metaprep::write_arff(ds));
    manifest += file + "\n";
  }
  metaprep::write_file_atomic(dir / "mini_corpus.manifest", manifest);
  std::cout << "wrote " << metaprep::mini_corpus_specs().size() << " datasets to " << dir / "mini_corpus" << '\n';
  return 0;
}
