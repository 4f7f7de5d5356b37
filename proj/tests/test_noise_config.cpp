#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mdisc/errors.hpp"
#include "mdisc/noise_config.hpp"

using namespace mdisc;

TEST(NoiseConfig, ParsesAllKeysAndComments) {
  const auto m = parse_noise_config(
      "# header\nphase_noise_sigma_rad = 0.1\n eta_D0=0.9 # trailing\n\neta_D1 = 0.8\neta_DA = 0.7\n"
      "eta_DB = 0.6\neta_DI = 0.5\nsinglet_visibility = 0.98\nsplitter_imbalance = -0.02\n");
  EXPECT_EQ(m.phase_noise_sigma_rad, 0.1);
  EXPECT_EQ(m.eta_d0, 0.9);
  EXPECT_EQ(m.eta_di, 0.5);
  EXPECT_EQ(m.splitter_imbalance, -0.02);
  EXPECT_FALSE(m.is_ideal());
}

TEST(NoiseConfig, MissingKeysStayIdeal) { EXPECT_TRUE(parse_noise_config("# nothing\n").is_ideal()); }

TEST(NoiseConfig, RejectsUnknownDuplicateAndMalformed) {
  EXPECT_THROW(parse_noise_config("eta_d0 = 0.9\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("eta_D0 = 0.9\neta_D0 = 0.8\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("eta_D0 = 0,9\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("eta_D0 0.9\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("eta_D0 = 0\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("singlet_visibility = 1.2\n"), ValidationError);
  EXPECT_THROW(parse_noise_config("splitter_imbalance = 0.5\n"), ValidationError);
}

TEST(NoiseConfig, FormatRoundTrips) {
  const auto m = noise_preset("preset_paperlike");
  const auto back = parse_noise_config(format_noise_config(m));
  EXPECT_EQ(format_noise_config(back), format_noise_config(m));
  EXPECT_EQ(back.singlet_visibility, 0.98);
}

TEST(NoiseConfig, PresetValues) {
  const auto m = noise_preset("preset_paperlike");
  EXPECT_EQ(m.phase_noise_sigma_rad, 0.1);
  EXPECT_EQ(m.singlet_visibility, 0.98);
  EXPECT_EQ(m.splitter_imbalance, 0.02);
  EXPECT_TRUE(noise_preset("ideal").is_ideal());
  EXPECT_THROW(noise_preset("nope"), ValidationError);
}

TEST(NoiseConfig, ShippedFilesMatchEmbeddedPresets) {
  for (const char* name : {"ideal", "preset_paperlike"}) {
    std::ifstream in(std::string(MDISC_NOISE_DIR) + "/" + name + ".cfg", std::ios::binary);
    ASSERT_TRUE(in) << name;
    std::ostringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), noise_preset_text(name));
    EXPECT_EQ(format_noise_config(load_noise_config(std::string(MDISC_NOISE_DIR) + "/" + name + ".cfg")),
              format_noise_config(noise_preset(name)));
  }
  EXPECT_THROW(load_noise_config("/nonexistent/file.cfg"), ValidationError);
}
