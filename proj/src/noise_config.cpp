#include "mdisc/noise_config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "mdisc/errors.hpp"

namespace mdisc {

namespace {

constexpr std::string_view kIdealText = R"(# ideal, version 1
phase_noise_sigma_rad = 0
singlet_visibility = 1
splitter_imbalance = 0
eta_D0 = 1
eta_D1 = 1
eta_DA = 1
eta_DB = 1
eta_DI = 1
)";

constexpr std::string_view kPaperlikeText = R"(# preset_paperlike, version 1
# Frozen imperfection magnitudes for the unambiguous scan. Magnitudes of the
# individual error sources of the optical setup are not published; these
# values keep the worst-case error rate of the ideal unambiguous scan below
# 3.2 % while exercising every noise channel.
phase_noise_sigma_rad = 0.1
singlet_visibility = 0.98
splitter_imbalance = 0.02
eta_D0 = 0.93
eta_D1 = 0.88
eta_DA = 0.91
eta_DB = 0.86
eta_DI = 0.9
)";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double* field(ImperfectionModel& m, std::string_view key) {
  static const std::map<std::string_view, double ImperfectionModel::*> fields{
      {"phase_noise_sigma_rad", &ImperfectionModel::phase_noise_sigma_rad},
      {"eta_D0", &ImperfectionModel::eta_d0},
      {"eta_D1", &ImperfectionModel::eta_d1},
      {"eta_DA", &ImperfectionModel::eta_da},
      {"eta_DB", &ImperfectionModel::eta_db},
      {"eta_DI", &ImperfectionModel::eta_di},
      {"singlet_visibility", &ImperfectionModel::singlet_visibility},
      {"splitter_imbalance", &ImperfectionModel::splitter_imbalance},
  };
  const auto it = fields.find(key);
  return it == fields.end() ? nullptr : &(m.*(it->second));
}

}  // namespace

bool ImperfectionModel::is_ideal() const {
  return eta_d0 == 1.0 && eta_d1 == 1.0 && eta_da == 1.0 && eta_db == 1.0 && eta_di == 1.0 &&
         phase_noise_sigma_rad == 0.0 && singlet_visibility == 1.0 && splitter_imbalance == 0.0;
}

void ImperfectionModel::validate() const {
  for (double eta : {eta_d0, eta_d1, eta_da, eta_db, eta_di}) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("detector efficiency must lie in (0, 1]");
  }
  if (!(phase_noise_sigma_rad >= 0.0)) throw ValidationError("phase_noise_sigma_rad must be >= 0");
  if (!(singlet_visibility >= 0.0 && singlet_visibility <= 1.0)) {
    throw ValidationError("singlet_visibility must lie in [0, 1]");
  }
  if (!(splitter_imbalance > -0.5 && splitter_imbalance < 0.5)) {
    throw ValidationError("splitter_imbalance must lie in (-1/2, 1/2)");
  }
}

ImperfectionModel parse_noise_config(std::string_view text) {
  ImperfectionModel model;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("noise config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    double* slot = field(model, key);
    if (!slot) throw ValidationError("noise config: unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ValidationError("noise config: duplicate key '" + std::string(key) + "'");
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ValidationError("noise config: bad number for '" + std::string(key) + "': " + std::string(value));
    }
    *slot = v;
  }
  model.validate();
  return model;
}

std::string format_noise_config(const ImperfectionModel& m) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  out << "phase_noise_sigma_rad = " << m.phase_noise_sigma_rad << '\n'
      << "singlet_visibility = " << m.singlet_visibility << '\n'
      << "splitter_imbalance = " << m.splitter_imbalance << '\n'
      << "eta_D0 = " << m.eta_d0 << '\n'
      << "eta_D1 = " << m.eta_d1 << '\n'
      << "eta_DA = " << m.eta_da << '\n'
      << "eta_DB = " << m.eta_db << '\n'
      << "eta_DI = " << m.eta_di << '\n';
  return out.str();
}

std::string_view noise_preset_text(std::string_view name) {
  if (name == "ideal") return kIdealText;
  if (name == "preset_paperlike") return kPaperlikeText;
  throw ValidationError("unknown noise preset '" + std::string(name) + "'");
}

ImperfectionModel noise_preset(std::string_view name) { return parse_noise_config(noise_preset_text(name)); }

ImperfectionModel load_noise_config(const std::string& name_or_path) {
  if (name_or_path == "ideal" || name_or_path == "preset_paperlike") return noise_preset(name_or_path);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open noise config '" + name_or_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_noise_config(buf.str());
}

}  // namespace mdisc
