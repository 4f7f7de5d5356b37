#include "mdisc/cli/manifest.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

#include "mdisc/errors.hpp"

namespace mdisc::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t RunManifest::checksum() const {
  std::string canon = command;
  canon += '\n';
  for (const auto& [k, v] : params) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  canon += "seed=" + std::to_string(seed) + '\n';
  canon += "version=" + version + '\n';
  return fnv1a64(canon);
}

std::vector<std::string> RunManifest::to_args() const {
  std::vector<std::string> args{command};
  for (const auto& [k, v] : params) {
    args.push_back("--" + k);
    args.push_back(v);
  }
  args.push_back("--seed");
  args.push_back(std::to_string(seed));
  return args;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["seed"] = seed;
  j["version"] = version;
  j["manifest_checksum"] = hex64(checksum());
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& o : outputs) {
    outs.push_back({{"path", o.path}, {"fnv1a64", hex64(o.checksum)}, {"bytes", o.bytes}});
  }
  j["outputs"] = outs;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) m.params.emplace_back(k, v.get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    for (const auto& o : j.at("outputs")) {
      OutputRecord r;
      r.path = o.at("path").get<std::string>();
      r.checksum = std::stoull(o.at("fnv1a64").get<std::string>(), nullptr, 16);
      r.bytes = o.at("bytes").get<std::size_t>();
      m.outputs.push_back(r);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace mdisc::cli
