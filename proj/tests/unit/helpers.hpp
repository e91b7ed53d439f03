#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "srnorder/network.hpp"

inline std::string fixture_path(const std::string& name) { return std::string(SRN_FIXTURE_DIR) + "/" + name; }

inline srnorder::ParsedNetwork load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name + ".net"));
  std::ostringstream buf;
  buf << in.rdbuf();
  return srnorder::parse_network(buf.str());
}

inline srnorder::ReactionNetwork net_of(const std::string& text) { return srnorder::parse_network(text).network; }
