#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "tridecomp/bench.hpp"
#include "tridecomp/errors.hpp"
#include "tridecomp/image_io.hpp"
#include "tridecomp/scenes.hpp"

namespace tridecomp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optionalNumber(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

std::string_view toString(LambdaInit init) { return init == LambdaInit::Aligned ? "aligned" : "zero"; }

struct DecomposeOptions {
  std::string input;
  std::string cleanRef;
  std::string outDir = ".";
  double noiseSigma = 0.0;  // 1/255 units
  std::uint64_t seed = 0;
  bool alphaNAuto = false;
  int bitDepth = 16;
  std::string variant = "proposed";
  std::string lambdaInit = "aligned";
  DecompParams params;
};

struct SynthOptions {
  std::string scene;
  int size = 256;
  std::string out;
  int bitDepth = 16;
  double noiseSigma = 0.0;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::vector<int> sizes{128, 256, 512};
  int repeats = 5;
  std::string jsonPath;
};

// Files are written into a staging directory and moved into place only
// after all of them succeeded.
class Staging {
 public:
  explicit Staging(const fs::path& outDir) : outDir_(outDir) {
    fs::create_directories(outDir_);
    std::random_device rd;
    dir_ = outDir_ / (".staging-" + std::to_string(rd()));
    fs::create_directory(dir_);
  }
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path path(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }
  void commit() {
    for (const std::string& n : names_) fs::rename(dir_ / n, outDir_ / n);
  }

 private:
  fs::path outDir_;
  fs::path dir_;
  std::vector<std::string> names_;
};

Image2D offsetBy(const Image2D& img, double offset) {
  Image2D out = img;
  for (double& x : out.values()) x += offset;
  return out;
}

int cmdDecompose(DecomposeOptions opt, std::ostream& out, std::ostream& err) {
  const auto variant = parseVariant(opt.variant);
  if (!variant) {
    err << "unknown variant: " << opt.variant << "\n";
    return kUsage;
  }
  opt.params.variant = *variant;
  opt.params.lambdaInit = opt.lambdaInit == "zero" ? LambdaInit::Zero : LambdaInit::Aligned;
  if (opt.alphaNAuto) {
    bool outside = false;
    opt.params.alphaN = presetAlphaN(opt.noiseSigma, &outside);
    if (outside) err << "warning: noise sigma " << opt.noiseSigma << " is outside the calibrated range\n";
  }
  try {
    opt.params.validate();
  } catch (const ParameterError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  }

  Image2D clean;
  std::optional<Image2D> reference;
  try {
    clean = readImage(opt.input);
    if (!opt.cleanRef.empty()) {
      reference = readImage(opt.cleanRef);
      if (!(reference->spec() == clean.spec())) {
        err << "clean reference size differs from the input\n";
        return kUsage;
      }
    }
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kIo;
  }

  Image2D f = clean;
  if (opt.noiseSigma > 0.0) {
    f = addGaussianNoise(clean, {opt.noiseSigma / 255.0, opt.seed});
    if (!reference) reference = clean;
  }

  DecompositionResult res;
  try {
    res = decompose(f, opt.params);
  } catch (const DivergenceError& e) {
    err << "diverged at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kDivergence;
  } catch (const ParameterError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  }

  MetricsReport m;
  if (reference) {
    m.psnrNoisyInput = psnr(*reference, f);
    m.psnrU = psnr(*reference, res.u);
  }
  m.stdN = stddev(res.n);
  m.iterations = res.iterations;
  m.elapsedSeconds = res.elapsedSeconds;
  if (!res.residualHistory.empty()) {
    const ResidualEntry& last = res.residualHistory.back();
    m.residualFinal = std::max(last.relChangeR, last.relChangeV);
  }
  m.converged = res.converged;
  m.params = opt.params;

  try {
    Staging stage(opt.outDir);
    writePng(stage.path("v.png"), res.v, opt.bitDepth);
    writePng(stage.path("w.png"), offsetBy(res.w, m.offset), opt.bitDepth);
    writePng(stage.path("n.png"), offsetBy(res.n, m.offset), opt.bitDepth);
    writePng(stage.path("u.png"), res.u, opt.bitDepth);
    writePng(stage.path("v_scaled.png"), linearScale01(res.v), opt.bitDepth);
    writePng(stage.path("w_scaled.png"), linearScale01(res.w), opt.bitDepth);
    writePng(stage.path("n_scaled.png"), linearScale01(res.n), opt.bitDepth);
    {
      std::ofstream js(stage.path("metrics.json"));
      js << metricsToJson(m).dump(2) << "\n";
      if (!js) throw IoError("cannot write metrics.json");
    }
    stage.commit();
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kIo;
  }

  out << std::fixed << std::setprecision(4) << "iterations " << m.iterations << "  stdN*255 "
      << m.stdN * 255.0;
  if (m.psnrU) out << "  psnrU " << *m.psnrU;
  out << "\n";
  return kOk;
}

int cmdSynth(const SynthOptions& opt, std::ostream& err) {
  const auto kind = parseScene(opt.scene);
  if (!kind) {
    err << "unknown scene: " << opt.scene << "\n";
    return kUsage;
  }
  if (opt.size < 64) {
    err << "scene size must be at least 64\n";
    return kUsage;
  }
  Image2D img = synthesizeScene(*kind, opt.size);
  if (opt.noiseSigma > 0.0) img = addGaussianNoise(img, {opt.noiseSigma / 255.0, opt.seed});
  try {
    writePng(opt.out, img, opt.bitDepth);
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kIo;
  }
  return kOk;
}

int cmdBench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  BenchConfig cfg;
  cfg.sizes = opt.sizes;
  cfg.repeats = opt.repeats;
  BenchReport report;
  try {
    report = runBench(cfg);
  } catch (const ParameterError& e) {
    err << e.what() << "\n";
    return kUsage;
  }
  out << "size  median_s_per_iter\n";
  for (const BenchRow& row : report.rows)
    out << std::setw(4) << row.size << "  " << std::scientific << std::setprecision(4) << row.medianSeconds
        << std::defaultfloat << "\n";
  out << "exponent " << std::fixed << std::setprecision(3) << report.exponent << std::defaultfloat << "\n";

  json j;
  j["rows"] = json::array();
  for (const BenchRow& row : report.rows)
    j["rows"].push_back({{"size", row.size}, {"medianSeconds", row.medianSeconds}, {"samples", row.samples}});
  j["exponent"] = report.exponent;
  j["repeats"] = opt.repeats;
  if (opt.jsonPath == "-") {
    out << j.dump(2) << "\n";
  } else if (!opt.jsonPath.empty()) {
    std::ofstream js(opt.jsonPath);
    js << j.dump(2) << "\n";
    if (!js) {
      err << "cannot write " << opt.jsonPath << "\n";
      return kIo;
    }
  }
  return kOk;
}

}  // namespace

json paramsToJson(const DecompParams& p) {
  return {{"alpha0", p.alpha0},
          {"alphaCurv", p.alphaCurv},
          {"alphaW", p.alphaW},
          {"alphaN", p.alphaN},
          {"tau", p.tau},
          {"gamma1", p.gamma1},
          {"gamma2", p.gamma2},
          {"gamma3", p.gamma3},
          {"c", p.c},
          {"kappa", p.kappa},
          {"rho", p.rho},
          {"iterMax", p.iterMax},
          {"padWidth", p.padWidth},
          {"variant", std::string(tridecomp::toString(p.variant))},
          {"lambdaInit", std::string(toString(p.lambdaInit))}};
}

json metricsToJson(const MetricsReport& m) {
  return {{"psnrNoisyInput", optionalNumber(m.psnrNoisyInput)},
          {"psnrU", optionalNumber(m.psnrU)},
          {"stdN", m.stdN},
          {"iterations", m.iterations},
          {"elapsedSeconds", m.elapsedSeconds},
          {"residualFinal", m.residualFinal},
          {"converged", m.converged},
          {"offset", m.offset},
          {"paramsEcho", paramsToJson(m.params)}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure / smooth / oscillatory image decomposition"};
  app.require_subcommand(1);

  DecomposeOptions dec;
  CLI::App* decCmd = app.add_subcommand("decompose", "Decompose an image into v, w and n");
  decCmd->add_option("input", dec.input, "Grayscale PNG or binary PGM")->required();
  decCmd->add_option("--out-dir", dec.outDir, "Directory for the outputs");
  decCmd->add_option("--clean-ref", dec.cleanRef, "Clean image for PSNR");
  decCmd->add_option("--alpha0", dec.params.alpha0);
  decCmd->add_option("--alpha-curv", dec.params.alphaCurv);
  auto* alphaN = decCmd->add_option("--alpha-n", dec.params.alphaN);
  decCmd->add_option("--alpha-w", dec.params.alphaW);
  decCmd->add_flag("--alpha-n-auto", dec.alphaNAuto, "Pick alpha-n from --noise-sigma")->excludes(alphaN);
  decCmd->add_option("--tau", dec.params.tau);
  decCmd->add_option("--rho", dec.params.rho);
  decCmd->add_option("--max-iters", dec.params.iterMax);
  decCmd->add_option("--pad", dec.params.padWidth);
  decCmd->add_option("--variant", dec.variant)
      ->check(CLI::IsMember({"proposed", "model1", "model2", "model3"}));
  decCmd->add_option("--lambda-init", dec.lambdaInit)->check(CLI::IsMember({"aligned", "zero"}));
  decCmd->add_option("--noise-sigma", dec.noiseSigma, "Synthetic noise, in 1/255 units")
      ->check(CLI::NonNegativeNumber);
  decCmd->add_option("--seed", dec.seed);
  decCmd->add_option("--bit-depth", dec.bitDepth)->check(CLI::IsMember({8, 16}));

  SynthOptions syn;
  CLI::App* synCmd = app.add_subcommand("synth", "Write a synthetic test scene");
  synCmd->add_option("scene", syn.scene, "cross-light, ellipse-wave, globe or square-ring")->required();
  synCmd->add_option("--size", syn.size);
  synCmd->add_option("--out", syn.out)->required();
  synCmd->add_option("--bit-depth", syn.bitDepth)->check(CLI::IsMember({8, 16}));
  synCmd->add_option("--noise-sigma", syn.noiseSigma)->check(CLI::NonNegativeNumber);
  synCmd->add_option("--seed", syn.seed);

  BenchOptions ben;
  CLI::App* benCmd = app.add_subcommand("bench", "Time single iterations across sizes");
  benCmd->add_option("--sizes", ben.sizes)->delimiter(',');
  benCmd->add_option("--repeats", ben.repeats)->check(CLI::PositiveNumber);
  benCmd->add_option("--json", ben.jsonPath, "Write JSON here ('-' for stdout)");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  if (*decCmd) return cmdDecompose(dec, out, err);
  if (*synCmd) return cmdSynth(syn, err);
  return cmdBench(ben, out, err);
}

}  // namespace tridecomp::cli
