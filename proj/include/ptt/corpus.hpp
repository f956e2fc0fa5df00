// Corpus manifests and tiered corpus runs.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "ptt/checker.hpp"

namespace ptt {

// One manifest line: "path expected tier", where expected is all-ok or
// fail:name,name,... and tier is core or stretch.
struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  bool all_ok = true;
  std::set<std::string> expected_fail;
  std::string tier = "core";
  int line = 0;
};

// Throws ParseError on malformed lines.
std::vector<ManifestEntry> parse_manifest(const std::string& text);

struct CorpusFileResult {
  ManifestEntry entry;
  FileReport report;
  bool passed = false;
  std::string summary;
  double seconds = 0;
};

struct CorpusReport {
  std::vector<CorpusFileResult> files;
  // Stretch entries never affect this.
  bool core_ok() const;
};

CorpusReport run_corpus(const std::string& manifest_path, bool include_stretch = true,
                        size_t fuel = kDefaultFuel);
std::string render_corpus(const CorpusReport& r, bool json);

}  // namespace ptt
