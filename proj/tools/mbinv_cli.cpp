// mbinv command-line tool. JSON on stdout, diagnostics on stderr.
// Exit codes: 0 ok, 1 usage error, 2 computation error.

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbinv/mbinv.hpp"

using nlohmann::json;
using namespace mbinv;
namespace fs = std::filesystem;

namespace {

struct Globals {
  bool pretty = false;
  bool timestamp = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- output helpers ------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string cell(const json& j) {
  if (j.is_null()) return "-";
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", j.get<double>());
    return buf;
  }
  return j.is_string() ? j.get<std::string>() : j.dump();
}

void print_report_table(const json& doc) {
  std::printf("%-5s %-8s %-8s %-10s %-9s %-9s %-8s %-8s %s\n", "cell", "theta", "length", "method", "theta_est",
              "len_est", "ssim", "psnr", "error");
  for (const auto& row : doc["rows"]) {
    const std::string t = cell(row["theta_deg"]), l = cell(row["length_px"]), id = cell(row["cell"]);
    std::printf("%-5s %-8s %-8s %-10s %-9s %-9s %-8s %-8s %s\n", id.c_str(), t.c_str(), l.c_str(), "blurred", "-",
                "-", cell(row["blurred"]["ssim"]).c_str(), cell(row["blurred"]["psnr"]).c_str(), "");
    for (auto it = row["methods"].begin(); it != row["methods"].end(); ++it) {
      const json& m = it.value();
      const std::string err = m["error"].is_null() ? "" : m["error"]["kind"].get<std::string>();
      std::printf("%-5s %-8s %-8s %-10s %-9s %-9s %-8s %-8s %s\n", id.c_str(), t.c_str(), l.c_str(),
                  it.key().c_str(), cell(m["theta_deg"]).c_str(), cell(m["length_px"]).c_str(),
                  cell(m["ssim"]).c_str(), cell(m["psnr"]).c_str(), err.c_str());
    }
  }
}

void emit(const Globals& g, const json& doc) {
  if (!g.pretty) {
    std::cout << doc.dump() << "\n";
    return;
  }
  if (doc.value("command", "") == "report" && doc.contains("rows")) {
    print_report_table(doc);
    return;
  }
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(doc, "", kv);
  std::size_t w = 0;
  for (const auto& [k, v] : kv) w = std::max(w, k.size());
  for (const auto& [k, v] : kv) std::printf("%-*s  %s\n", static_cast<int>(w), k.c_str(), v.c_str());
}

void set_psnr(json& obj, double p) {
  obj["psnr"] = finite_or_null(p);
  obj["psnr_infinite"] = std::isinf(p);
}

std::string manifest_path(const std::string& artifact) { return artifact + ".manifest.json"; }

void write_manifest(const Globals& g, const std::string& path, const std::string& command, const json& params,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    const json& seed) {
  json ts = nullptr;
  if (g.timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    ts = buf;
  }
  const json m = {{"command", command},   {"parameters", params},       {"inputs", inputs},
                  {"outputs", outputs},   {"seed", seed},               {"tool_version", MBINV_VERSION},
                  {"timestamp", ts}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write manifest: " + path);
  f << m.dump(2) << "\n";
  if (!f) throw Error(ErrorKind::io, "cannot write manifest: " + path);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& s, const std::string& what) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t p1 = 0, p2 = 0;
      const std::string a = item.substr(0, colon), b = item.substr(colon + 1);
      const int x = std::stoi(a, &p1), y = std::stoi(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(item);
      out.emplace_back(x, y);
    } catch (const std::exception&) {
      throw UsageError("bad " + what + " entry '" + item + "', expected A:B");
    }
  }
  return out;
}

struct GridCell {
  double theta = 0.0;
  double length = 0.0;
};

std::vector<GridCell> parse_grid(const std::string& s) {
  std::vector<GridCell> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      std::size_t p1 = 0, p2 = 0;
      const std::string a = item.substr(0, colon), b = item.substr(colon + 1);
      GridCell c{std::stod(a, &p1), std::stod(b, &p2)};
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(item);
      out.push_back(c);
    } catch (const std::exception&) {
      throw UsageError("bad grid entry '" + item + "', expected THETA:LENGTH");
    }
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

EstimateReport run_estimate(const std::string& method, const Image& img, const Image* reference, bool gradient) {
  if (method == "blind") {
    BlindConfig cfg;
    cfg.gradient = gradient;
    return estimate_blind(img, cfg);
  }
  if (method == "cepstrum") return estimate_cepstrum(img);
  if (method == "freq" || method == "moment") {
    if (!reference) throw UsageError("--reference is required for method " + method);
    return method == "freq" ? estimate_params_freq(*reference, img) : estimate_params_moments(*reference, img);
  }
  throw UsageError("unknown method '" + method + "'");
}

json error_json(const Error& e) {
  return {{"kind", to_string(e.kind())}, {"message", e.what()}, {"diagnostics", e.diagnostics()}};
}

// ---- subcommands ---------------------------------------------------------

struct BlurOpts {
  std::string input, output, boundary = "replicate", extent = "same";
  double theta = 0.0, length = 1.0, sigma = 0.0;
  std::uint64_t seed = 0;
};

json cmd_blur(const Globals& g, const BlurOpts& o) {
  const MotionParams mp = MotionParams::make(o.theta, o.length);
  const Boundary b = parse_boundary(o.boundary);
  const Extent e = parse_extent(o.extent);
  const Image in = load_image(o.input);
  const Image out = degrade(in, mp, {o.sigma, o.seed}, b, e);
  save_image(out, o.output);
  const json params = {{"theta_deg", mp.theta_deg}, {"length_px", mp.length_px}, {"noise_sigma", o.sigma},
                       {"boundary", o.boundary},    {"extent", o.extent}};
  write_manifest(g, manifest_path(o.output), "blur", params, {o.input}, {o.output}, o.seed);
  return {{"command", "blur"},
          {"input", o.input},
          {"output", o.output},
          {"manifest", manifest_path(o.output)},
          {"rows", out.rows},
          {"cols", out.cols},
          {"parameters", params},
          {"seed", o.seed}};
}

struct PsfOpts {
  double theta = 0.0, length = 1.0;
  std::string kernel_out, transfer_out, transfer = "analytic";
  int size = 256;
};

json cmd_psf(const Globals& g, const PsfOpts& o) {
  const MotionParams mp = MotionParams::make(o.theta, o.length);
  if (o.size < 1) throw Error(ErrorKind::invalid_argument, "--size must be positive");
  const Psf p = psf_kernel(mp);
  json doc = {{"command", "psf"}, {"psf", kernel_to_json(p)}};
  std::vector<std::string> outputs;
  if (!o.kernel_out.empty()) {
    save_image(normalize(p.kernel), o.kernel_out);
    outputs.push_back(o.kernel_out);
  }
  if (!o.transfer_out.empty()) {
    const Spectrum H = blur_transfer(mp, o.size, o.size, parse_transfer_model(o.transfer));
    Image mag(o.size, o.size);
    for (std::size_t i = 0; i < H.bins.size(); ++i) mag.px[i] = std::min(1.0, std::abs(H.bins[i]));
    save_image(fftshift(mag), o.transfer_out);
    outputs.push_back(o.transfer_out);
  }
  if (!outputs.empty()) {
    const json params = {{"theta_deg", mp.theta_deg}, {"length_px", mp.length_px}, {"size", o.size},
                         {"transfer", o.transfer}};
    write_manifest(g, manifest_path(outputs.front()), "psf", params, {}, outputs, nullptr);
    doc["outputs"] = outputs;
    doc["manifest"] = manifest_path(outputs.front());
  }
  return doc;
}

struct SpectrumOpts {
  std::string input, output, cepstrum_out;
  bool gradient = false;
};

json cmd_spectrum(const Globals& g, const SpectrumOpts& o) {
  const Image in = load_image(o.input);
  const Spectrum F = dft2(in);
  const Image lm = o.gradient ? normalize(blind_spectrum(in, true)) : log_magnitude(F);
  save_image(lm, o.output);
  std::vector<std::string> outputs{o.output};
  json doc = {{"command", "spectrum"}, {"input", o.input}, {"rows", in.rows}, {"cols", in.cols},
              {"gradient", o.gradient}, {"dc_magnitude", std::abs(F.bins[0])}};
  if (!o.cepstrum_out.empty()) {
    const Image c = cepstrum2(in);
    double lo = c.px[0], hi = c.px[0];
    for (double v : c.px) { lo = std::min(lo, v); hi = std::max(hi, v); }
    save_image(normalize(c), o.cepstrum_out);
    outputs.push_back(o.cepstrum_out);
    doc["cepstrum_range"] = {lo, hi};
  }
  write_manifest(g, manifest_path(o.output), "spectrum", {{"gradient", o.gradient}}, {o.input}, outputs, nullptr);
  doc["outputs"] = outputs;
  doc["manifest"] = manifest_path(o.output);
  return doc;
}

struct EstimateOpts {
  std::string input, method = "blind", reference;
  bool no_gradient = false;
};

json cmd_estimate(const EstimateOpts& o) {
  const Image in = load_image(o.input);
  std::optional<Image> ref;
  if (!o.reference.empty()) ref = load_image(o.reference);
  const EstimateReport r = run_estimate(o.method, in, ref ? &*ref : nullptr, !o.no_gradient);
  return {{"command", "estimate"}, {"input", o.input}, {"report", to_json(r)}};
}

struct DeblurOpts {
  std::string input, output, method = "wiener", transfer = "kernel";
  double theta = 0.0, length = 1.0, nsr = 1e-3, floor = 1e-3;
};

json cmd_deblur(const Globals& g, const DeblurOpts& o) {
  const MotionParams mp = MotionParams::make(o.theta, o.length);
  const TransferModel tm = parse_transfer_model(o.transfer);
  const Image in = load_image(o.input);
  warn("deblur assumes a circular blur model; expect ringing near borders of non-periodic images");
  Image out;
  if (o.method == "wiener") {
    WienerConfig cfg;
    cfg.nsr = o.nsr;
    cfg.transfer = tm;
    out = wiener_deblur(in, mp, cfg);
  } else if (o.method == "inverse") {
    out = inverse_filter(in, mp, o.floor, tm);
  } else {
    throw UsageError("unknown deblur method '" + o.method + "'");
  }
  save_image(out, o.output);
  json params = {{"theta_deg", mp.theta_deg}, {"length_px", mp.length_px}, {"method", o.method},
                 {"transfer", o.transfer}};
  if (o.method == "wiener")
    params["nsr"] = o.nsr;
  else
    params["floor"] = o.floor;
  write_manifest(g, manifest_path(o.output), "deblur", params, {o.input}, {o.output}, nullptr);
  return {{"command", "deblur"}, {"input", o.input},   {"output", o.output},
          {"manifest", manifest_path(o.output)}, {"parameters", params}};
}

struct InvariantsOpts {
  std::string input, domain = "moment", reference, compare, bins = "1:0,0:1,1:1,2:0,0:2";
  int orders = 4;
};

json cmd_invariants(const InvariantsOpts& o) {
  const Image in = load_image(o.input);
  json doc = {{"command", "invariants"}, {"input", o.input}, {"domain", o.domain}};
  if (o.domain == "moment") {
    if (o.orders < 0 || o.orders > kMaxMomentOrder)
      throw Error(ErrorKind::invalid_argument, "--orders must be in [0, " + std::to_string(kMaxMomentOrder) + "]");
    const BlurInvariantSet a = blur_invariants(in, o.orders);
    doc["invariants"] = to_json(a);
    if (!o.compare.empty()) {
      const BlurInvariantSet b = blur_invariants(load_image(o.compare), o.orders);
      json diffs = json::array();
      for (const auto& [p, q] : a.indices()) {
        const double den = std::max({std::abs(a.get(p, q)), std::abs(b.get(p, q)), 1e-12 * std::abs(a.get(0, 0))});
        diffs.push_back({{"p", p}, {"q", q}, {"other", b.get(p, q)},
                         {"relative_difference", finite_or_null(std::abs(a.get(p, q) - b.get(p, q)) / den)}});
      }
      doc["compare"] = o.compare;
      doc["differences"] = diffs;
    }
  } else if (o.domain == "freq") {
    if (o.reference.empty()) throw UsageError("--reference is required for --domain freq");
    const Image ref = load_image(o.reference);
    const auto samples = xi_samples(ref, in, parse_pairs(o.bins, "bin"));
    json arr = json::array();
    for (const auto& s : samples) arr.push_back(to_json(s));
    doc["reference"] = o.reference;
    doc["fit"] = to_json(estimate_params_freq(ref, in));
    doc["samples"] = arr;
  } else {
    throw UsageError("unknown domain '" + o.domain + "', expected freq or moment");
  }
  return doc;
}

struct MetricsOpts {
  std::string test, reference;
};

json cmd_metrics(const MetricsOpts& o) {
  const Image t = load_image(o.test), r = load_image(o.reference);
  json doc = {{"command", "metrics"}, {"test", o.test}, {"reference", o.reference}, {"ssim", ssim(t, r)}};
  set_psnr(doc, psnr(t, r));
  return doc;
}

struct SynthOpts {
  std::string output, kind = "phantom";
  int rows = 256, cols = 256;
  std::uint64_t seed = 1;
};

json cmd_synth(const Globals& g, const SynthOpts& o) {
  Image img;
  if (o.kind == "phantom")
    img = phantom(o.rows, o.cols, o.seed);
  else if (o.kind == "random")
    img = random_image(o.rows, o.cols, o.seed);
  else if (o.kind == "impulse")
    img = impulse(o.rows, o.cols);
  else
    throw UsageError("unknown kind '" + o.kind + "'");
  save_image(img, o.output);
  const json params = {{"kind", o.kind}, {"rows", o.rows}, {"cols", o.cols}};
  write_manifest(g, manifest_path(o.output), "synth", params, {}, {o.output}, o.seed);
  return {{"command", "synth"}, {"output", o.output}, {"manifest", manifest_path(o.output)}, {"parameters", params},
          {"seed", o.seed}};
}

struct ReportOpts {
  std::string input, grid = "45:40", methods = "blind,cepstrum", out_dir = "report", boundary = "circular";
  double sigma = 0.0, nsr = 1e-3;
  std::uint64_t seed = 0;
};

json cmd_report(const Globals& g, const ReportOpts& o) {
  const std::vector<GridCell> grid = parse_grid(o.grid);
  const std::vector<std::string> methods = split_list(o.methods);
  for (const auto& m : methods)
    if (m != "blind" && m != "cepstrum" && m != "freq" && m != "moment")
      throw UsageError("unknown method '" + m + "'");
  const Boundary boundary = parse_boundary(o.boundary);
  if (o.sigma < 0) throw Error(ErrorKind::invalid_argument, "--noise-sigma must be non-negative");
  if (!(o.nsr >= 0)) throw Error(ErrorKind::invalid_argument, "--nsr must be non-negative");
  std::vector<MotionParams> params;
  for (const auto& c : grid) params.push_back(MotionParams::make(c.theta, c.length));

  // everything that can fail before any output exists
  const Image original = load_image(o.input);

  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + o.out_dir + ": " + ec.message());
  const fs::path dir(o.out_dir);
  std::vector<std::string> outputs;
  auto save = [&](const Image& img, const std::string& name) {
    const std::string p = (dir / name).string();
    save_image(img, p);
    outputs.push_back(p);
    return p;
  };

  json rows = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const MotionParams& mp = params[i];
    char tag[32];
    std::snprintf(tag, sizeof tag, "cell%03zu", i);
    const std::uint64_t cell_seed = o.seed + i;
    json row = {{"cell", i}, {"theta_deg", mp.theta_deg}, {"length_px", mp.length_px}, {"noise_seed", cell_seed}};
    const Image blurred = degrade(original, mp, {o.sigma, cell_seed}, boundary, Extent::same);
    json files = {{"blurred", save(blurred, std::string(tag) + "_blurred.pgm")},
                  {"spectrum", save(log_magnitude(dft2(blurred)), std::string(tag) + "_spectrum.pgm")},
                  {"cepstrum", save(normalize(cepstrum2(blurred)), std::string(tag) + "_cepstrum.pgm")}};
    json base = {{"ssim", ssim(blurred, original)}};
    set_psnr(base, psnr(blurred, original));
    row["blurred"] = base;
    json per = json::object();
    for (const auto& m : methods) {
      json entry = {{"theta_deg", nullptr}, {"length_px", nullptr}, {"ssim", nullptr}, {"psnr", nullptr},
                    {"psnr_infinite", false}, {"error", nullptr}};
      try {
        const EstimateReport r = run_estimate(m, blurred, &original, true);
        entry["theta_deg"] = finite_or_null(r.theta_deg);
        entry["length_px"] = finite_or_null(r.length_px);
        entry["blur_detected"] = r.blur_detected;
        if (!std::isfinite(r.theta_deg) || !std::isfinite(r.length_px))
          throw Error(ErrorKind::low_confidence, "estimate is not finite");
        WienerConfig cfg;
        cfg.nsr = o.nsr;
        const Image restored = wiener_deblur(blurred, MotionParams::make(r.theta_deg, std::max(r.length_px, 1.0)), cfg);
        files[m + "_restored"] = save(restored, std::string(tag) + "_" + m + "_restored.pgm");
        entry["ssim"] = ssim(restored, original);
        set_psnr(entry, psnr(restored, original));
      } catch (const Error& e) {
        std::fprintf(stderr, "report: cell %zu method %s: %s: %s\n", i, m.c_str(), to_string(e.kind()), e.what());
        entry["error"] = error_json(e);
      }
      per[m] = entry;
    }
    row["methods"] = per;
    row["files"] = files;
    rows.push_back(row);
  }

  const json parameters = {{"grid", o.grid},   {"methods", methods},    {"noise_sigma", o.sigma},
                           {"nsr", o.nsr},     {"boundary", o.boundary}, {"extent", "same"},
                           {"deblur", "wiener"}};
  json doc = {{"command", "report"}, {"input", o.input}, {"out_dir", o.out_dir}, {"parameters", parameters},
              {"seed", o.seed},      {"rows", rows}};
  const std::string report_path = (dir / "report.json").string();
  {
    std::ofstream f(report_path, std::ios::binary);
    f << doc.dump(2) << "\n";
    if (!f) throw Error(ErrorKind::io, "cannot write " + report_path);
  }
  outputs.push_back(report_path);
  const std::string mpath = (dir / "manifest.json").string();
  write_manifest(g, mpath, "report", parameters, {o.input}, outputs, o.seed);
  doc["report"] = report_path;
  doc["manifest"] = mpath;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Motion-blur estimation and restoration toolkit", "mbinv"};
  app.set_version_flag("--version", MBINV_VERSION);
  app.add_flag("--pretty", g.pretty, "Human-readable output instead of JSON");
  app.add_flag("--timestamp", g.timestamp, "Record the wall-clock time in manifests");
  app.require_subcommand(1);

  const auto theta_len = [](CLI::App* sc, double& theta, double& length) {
    sc->add_option("--theta", theta, "Motion angle in degrees")->required();
    sc->add_option("--length", length, "Motion length in pixels")->required();
  };

  BlurOpts blur;
  auto* sc_blur = app.add_subcommand("blur", "Apply motion blur and optional Gaussian noise");
  sc_blur->add_option("input", blur.input, "Input PGM")->required();
  sc_blur->add_option("-o,--output", blur.output, "Output PGM")->required();
  theta_len(sc_blur, blur.theta, blur.length);
  sc_blur->add_option("--noise-sigma", blur.sigma, "Gaussian noise standard deviation")->capture_default_str();
  sc_blur->add_option("--seed", blur.seed, "Noise seed")->capture_default_str();
  sc_blur->add_option("--boundary", blur.boundary, "zero|replicate|circular")->capture_default_str();
  sc_blur->add_option("--extent", blur.extent, "same|full")->capture_default_str();

  PsfOpts psf;
  auto* sc_psf = app.add_subcommand("psf", "Motion PSF kernel and transfer magnitude");
  theta_len(sc_psf, psf.theta, psf.length);
  sc_psf->add_option("--kernel-out", psf.kernel_out, "Kernel PGM (peak-normalized)");
  sc_psf->add_option("--transfer-out", psf.transfer_out, "Transfer magnitude PGM (DC centred)");
  sc_psf->add_option("--size", psf.size, "Transfer image size")->capture_default_str();
  sc_psf->add_option("--transfer", psf.transfer, "analytic|kernel")->capture_default_str();

  SpectrumOpts spec;
  auto* sc_spec = app.add_subcommand("spectrum", "Log-magnitude spectrum and cepstrum images");
  sc_spec->add_option("input", spec.input, "Input PGM")->required();
  sc_spec->add_option("-o,--output", spec.output, "Log-magnitude PGM")->required();
  sc_spec->add_option("--cepstrum-out", spec.cepstrum_out, "Cepstrum PGM");
  sc_spec->add_flag("--gradient", spec.gradient, "Windowed gradient spectrum as used by blind estimation");

  EstimateOpts est;
  auto* sc_est = app.add_subcommand("estimate", "Estimate blur angle and length");
  sc_est->add_option("input", est.input, "Blurred PGM")->required();
  sc_est->add_option("--method", est.method, "blind|cepstrum|freq|moment")->capture_default_str();
  sc_est->add_option("--reference", est.reference, "Unblurred reference (freq, moment)");
  sc_est->add_flag("--no-gradient", est.no_gradient, "Blind: use the plain image spectrum");

  DeblurOpts deb;
  auto* sc_deb = app.add_subcommand("deblur", "Restore with known motion parameters");
  sc_deb->add_option("input", deb.input, "Blurred PGM")->required();
  sc_deb->add_option("-o,--output", deb.output, "Restored PGM")->required();
  theta_len(sc_deb, deb.theta, deb.length);
  sc_deb->add_option("--method", deb.method, "wiener|inverse")->capture_default_str();
  sc_deb->add_option("--nsr", deb.nsr, "Wiener noise-to-signal ratio")->capture_default_str();
  sc_deb->add_option("--floor", deb.floor, "Inverse filter |H| floor")->capture_default_str();
  sc_deb->add_option("--transfer", deb.transfer, "kernel|analytic")->capture_default_str();

  InvariantsOpts inv;
  auto* sc_inv = app.add_subcommand("invariants", "Blur invariants in the moment or frequency domain");
  sc_inv->add_option("input", inv.input, "Image PGM (blurred image for --domain freq)")->required();
  sc_inv->add_option("--domain", inv.domain, "moment|freq")->capture_default_str();
  sc_inv->add_option("--orders", inv.orders, "Maximum moment order")->capture_default_str();
  sc_inv->add_option("--bins", inv.bins, "Frequency bins u:v,...")->capture_default_str();
  sc_inv->add_option("--reference", inv.reference, "Unblurred reference (freq)");
  sc_inv->add_option("--compare", inv.compare, "Second image to compare invariants against (moment)");

  MetricsOpts met;
  auto* sc_met = app.add_subcommand("metrics", "SSIM and PSNR against a reference");
  sc_met->add_option("--test", met.test, "Test PGM")->required();
  sc_met->add_option("--reference", met.reference, "Reference PGM")->required();

  SynthOpts syn;
  auto* sc_syn = app.add_subcommand("synth", "Write a synthetic test image");
  sc_syn->add_option("-o,--output", syn.output, "Output PGM")->required();
  sc_syn->add_option("--kind", syn.kind, "phantom|random|impulse")->capture_default_str();
  sc_syn->add_option("--rows", syn.rows)->capture_default_str();
  sc_syn->add_option("--cols", syn.cols)->capture_default_str();
  sc_syn->add_option("--seed", syn.seed)->capture_default_str();

  ReportOpts rep;
  auto* sc_rep = app.add_subcommand("report", "Blur, estimate, deblur and score over a parameter grid");
  sc_rep->add_option("--input", rep.input, "Original PGM")->required();
  sc_rep->add_option("--grid", rep.grid, "THETA:LENGTH,... (empty for none)")->capture_default_str();
  sc_rep->add_option("--methods", rep.methods, "blind,cepstrum,freq,moment")->capture_default_str();
  sc_rep->add_option("--noise-sigma", rep.sigma)->capture_default_str();
  sc_rep->add_option("--seed", rep.seed, "Noise seed of the first cell; cell i uses seed+i")->capture_default_str();
  sc_rep->add_option("--nsr", rep.nsr)->capture_default_str();
  sc_rep->add_option("--boundary", rep.boundary, "Blur boundary: circular|zero|replicate")->capture_default_str();
  sc_rep->add_option("--out-dir", rep.out_dir)->capture_default_str();

  std::string command = "mbinv";
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    for (auto* sc : app.get_subcommands()) command = sc->get_name();
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    std::cout << json{{"command", command}, {"error", {{"kind", "usage"}, {"message", e.what()}, {"diagnostics", json::object()}}}}.dump()
              << "\n";
    return 1;
  }

  command = app.get_subcommands().front()->get_name();
  try {
    json doc;
    if (*sc_blur) doc = cmd_blur(g, blur);
    else if (*sc_psf) doc = cmd_psf(g, psf);
    else if (*sc_spec) doc = cmd_spectrum(g, spec);
    else if (*sc_est) doc = cmd_estimate(est);
    else if (*sc_deb) doc = cmd_deblur(g, deb);
    else if (*sc_inv) doc = cmd_invariants(inv);
    else if (*sc_met) doc = cmd_metrics(met);
    else if (*sc_syn) doc = cmd_synth(g, syn);
    else if (*sc_rep) doc = cmd_report(g, rep);
    emit(g, doc);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << json{{"command", command}, {"error", {{"kind", "usage"}, {"message", e.what()}, {"diagnostics", json::object()}}}}.dump()
              << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    std::cout << json{{"command", command}, {"error", error_json(e)}}.dump() << "\n";
    return e.kind() == ErrorKind::invalid_argument ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << json{{"command", command}, {"error", {{"kind", "internal"}, {"message", e.what()}, {"diagnostics", json::object()}}}}.dump()
              << "\n";
    return 2;
  }
}
