#pragma once

#include <string>
#include <string_view>

namespace mdisc {

/// Imperfections of the simulated optical setup.
struct ImperfectionModel {
  double eta_d0 = 1.0;  ///< detector efficiencies, in (0, 1]
  double eta_d1 = 1.0;
  double eta_da = 1.0;
  double eta_db = 1.0;
  double eta_di = 1.0;
  double phase_noise_sigma_rad = 0.0;  ///< per-trial Gaussian phase in the readout interferometer
  double singlet_visibility = 1.0;     ///< probe = V |singlet><singlet| + (1 - V) I/4
  double splitter_imbalance = 0.0;     ///< final coupler splits (1/2 + e) : (1/2 - e)

  static ImperfectionModel ideal() { return {}; }
  bool is_ideal() const;
  /// Throws ValidationError for out-of-range fields.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Keys: phase_noise_sigma_rad,
/// eta_D0, eta_D1, eta_DA, eta_DB, eta_DI, singlet_visibility,
/// splitter_imbalance. Absent keys keep their ideal value; unknown keys,
/// duplicates and malformed numbers throw ValidationError.
ImperfectionModel parse_noise_config(std::string_view text);

/// Canonical text form (all keys, fixed order, 17 significant digits).
std::string format_noise_config(const ImperfectionModel& model);

/// Built-in presets: "ideal" and "preset_paperlike". Throws ValidationError
/// for unknown names.
ImperfectionModel noise_preset(std::string_view name);
std::string_view noise_preset_text(std::string_view name);

/// Preset name, or a path to a configuration file.
ImperfectionModel load_noise_config(const std::string& name_or_path);

}  // namespace mdisc
