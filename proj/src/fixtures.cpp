#include "automode/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "automode/errors.hpp"
#include "text_util.hpp"

namespace automode {

const Fixture& uwcse_fragment() {
  static const Fixture f{
      "student(stud)\n"
      "inPhase(stud,phase)\n"
      "professor(prof)\n"
      "hasPosition(prof,position)\n"
      "publication(title,author)\n"
      "advisedBy(stud,prof)\n",
      {
          {"student", "stud\nalice\njohn\n"},
          {"inPhase", "stud,phase\nalice,post_quals\njohn,post_quals\n"},
          {"professor", "prof\nbob\nmary\n"},
          {"hasPosition", "prof,position\nbob,assistant_prof\nmary,associate_prof\n"},
          {"publication", "title,author\np1,alice\np1,bob\np2,john\np2,mary\n"},
      },
      "+ advisedBy(alice,bob)\n"
      "+ advisedBy(john,mary)\n"
      "- advisedBy(alice,mary)\n"
      "- advisedBy(john,bob)\n",
      "# constant_threshold=5\n"
      "PREDICATES:\n"
      "advisedBy(T1,T3)\n"
      "student(T1)\n"
      "inPhase(T1,T2)\n"
      "professor(T3)\n"
      "hasPosition(T3,T4)\n"
      "publication(T5,T1)\n"
      "publication(T5,T3)\n"
      "MODES:\n"
      "advisedBy(+,+)\n"
      "student(+)\n"
      "inPhase(+,-)\n"
      "inPhase(+,#)\n"
      "professor(+)\n"
      "hasPosition(+,-)\n"
      "publication(-,+)\n",
      "advisedBy",
  };
  return f;
}

const Fixture& author_overlap_fixture() {
  static const Fixture f{
      "student(stud)\n"
      "inPhase(stud,phase)\n"
      "professor(prof)\n"
      "hasPosition(prof,position)\n"
      "publication(title,author)\n"
      "ta(course,stud,term)\n"
      "advisedBy(stud,prof)\n",
      {
          {"student", "stud\ns1\ns2\ns3\ns4\ns5\ns6\n"},
          {"inPhase", "stud,phase\ns1,post_quals\ns2,post_quals\ns3,pre_quals\ns4,pre_quals\ns5,post_quals\n"},
          {"professor", "prof\np1\np2\np3\np4\np5\n"},
          {"hasPosition", "prof,position\np1,faculty\np2,faculty\np3,adjunct\np4,faculty_emeritus\n"},
          {"publication", "title,author\nt1,s1\nt1,p1\nt2,s2\nt2,p2\nt3,s1\nt3,p2\n"},
          {"ta", "course,stud,term\nc1,s1,w1\nc2,s2,w1\nc1,s3,w2\nc2,s4,w2\n"},
          {"advisedBy", "stud,prof\ns1,p1\ns2,p2\ns3,p3\n"},
      },
      "",
      "",
      "advisedBy",
  };
  return f;
}

DatabaseInstance load_fixture(const Fixture& fixture) {
  DatabaseInstance db;
  std::istringstream schema(fixture.schema);
  for (std::string line; std::getline(schema, line);) {
    auto t = detail::trim(line);
    if (!t.empty() && t.front() != '#') db.add_relation(parse_schema_line(t));
  }
  for (const auto& [rel, csv] : fixture.facts) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (detail::trim(line).empty()) continue;
      std::vector<std::string> values;
      for (auto v : detail::split(line, ',')) values.emplace_back(detail::trim(v));
      db.insert(rel, values);
    }
  }
  return db;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "facts");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw LoadError("cannot write " + p.string());
    out << text;
  };
  write(dir / "schema.txt", fixture.schema);
  for (const auto& [rel, csv] : fixture.facts) write(dir / "facts" / (rel + ".csv"), csv);
  if (!fixture.examples.empty()) write(dir / "examples.txt", fixture.examples);
  if (!fixture.bias.empty()) write(dir / "bias_manual.txt", fixture.bias);
}

}  // namespace automode
