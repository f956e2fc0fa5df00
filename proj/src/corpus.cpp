#include "ptt/corpus.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "json.hpp"

namespace ptt {

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  std::vector<ManifestEntry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ws(raw);
    std::vector<std::string> fields;
    for (std::string f; ws >> f;) fields.push_back(f);
    if (fields.empty()) continue;
    if (fields.size() != 3) throw ParseError("expected 'path expected tier'", {line, 1});
    ManifestEntry e;
    e.path = fields[0];
    e.line = line;
    if (fields[1] == "all-ok") {
      e.all_ok = true;
    } else if (fields[1].rfind("fail:", 0) == 0) {
      e.all_ok = false;
      std::istringstream names(fields[1].substr(5));
      for (std::string n; std::getline(names, n, ',');)
        if (!n.empty()) e.expected_fail.insert(n);
      if (e.expected_fail.empty()) throw ParseError("fail: needs at least one declaration name", {line, 1});
    } else {
      throw ParseError("expected outcome must be all-ok or fail:names", {line, 1});
    }
    if (fields[2] != "core" && fields[2] != "stretch") throw ParseError("tier must be core or stretch", {line, 1});
    e.tier = fields[2];
    out.push_back(std::move(e));
  }
  return out;
}

bool CorpusReport::core_ok() const {
  for (auto& f : files)
    if (f.entry.tier == "core" && !f.passed) return false;
  return true;
}

namespace {

void judge(CorpusFileResult& r) {
  const FileReport& rep = r.report;
  if (rep.parse_failed) {
    r.passed = false;
    r.summary = "parse error: " + rep.parse_message;
    return;
  }
  std::set<std::string> failed;
  for (auto& d : rep.decls)
    if (!d.ok) failed.insert(d.name);
  std::ostringstream os;
  os << rep.decls.size() - failed.size() << "/" << rep.decls.size() << " ok";
  if (r.entry.all_ok) {
    r.passed = failed.empty();
  } else {
    r.passed = failed == r.entry.expected_fail;
    os << ", expected failures";
    for (auto& n : r.entry.expected_fail) os << " " << n;
  }
  if (!r.passed && !failed.empty()) {
    os << ", failed";
    for (auto& n : failed) os << " " << n;
  }
  r.summary = os.str();
}

}  // namespace

CorpusReport run_corpus(const std::string& manifest_path, bool include_stretch, size_t fuel) {
  namespace fs = std::filesystem;
  CorpusReport rep;
  fs::path base = fs::path(manifest_path).parent_path();
  for (auto& e : parse_manifest(read_text_file(manifest_path))) {
    if (e.tier == "stretch" && !include_stretch) continue;
    CorpusFileResult r;
    r.entry = e;
    auto t0 = std::chrono::steady_clock::now();
    std::string path = (base / e.path).string();
    try {
      r.report = check_file(path, fuel);
    } catch (const std::runtime_error& err) {
      r.report.path = path;
      r.report.parse_failed = true;
      r.report.parse_message = err.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    judge(r);
    rep.files.push_back(std::move(r));
  }
  return rep;
}

std::string render_corpus(const CorpusReport& r, bool json) {
  std::ostringstream os;
  for (const char* tier : {"core", "stretch"}) {
    bool header = false;
    for (auto& f : r.files) {
      if (f.entry.tier != tier) continue;
      if (json) {
        nlohmann::json j = {{"file", f.entry.path}, {"tier", tier}, {"status", f.passed ? "PASS" : "FAIL"},
                            {"summary", f.summary}};
        os << j.dump() << "\n";
        continue;
      }
      if (!header) os << "[" << tier << "]\n";
      header = true;
      os << (f.passed ? "PASS " : "FAIL ") << f.entry.path << " (" << f.summary << ")\n";
      if (!f.passed)
        for (auto& d : f.report.decls)
          if (!d.ok)
            os << "  FAIL " << d.name << ": " << d.rule << " premise " << d.premise << " at " << d.loc.line << ":"
               << d.loc.col << ": " << d.message << "\n";
    }
  }
  if (!json) os << (r.core_ok() ? "core: all passed\n" : "core: FAILED\n");
  return os.str();
}

}  // namespace ptt
