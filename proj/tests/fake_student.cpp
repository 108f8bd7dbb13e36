// Scriptable child process for the external-student protocol tests.
//   fake_student echo          reward = first param, eval too
//   fake_student malformed     answers the first request with broken JSON
//   fake_student exit-after N  exits without replying to request N+1
//   fake_student silent        never answers
//   fake_student wrong-type    {"reward":"high"}
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  const long exit_after = argc > 2 ? std::atol(argv[2]) : -1;
  std::string line;
  long served = 0;
  while (std::getline(std::cin, line)) {
    if (mode == "exit-after" && served == exit_after) return 3;
    if (mode == "silent") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
      return 0;
    }
    if (mode == "malformed") {
      std::cout << "{\"reward\": 1.0" << std::endl;
      continue;
    }
    auto req = nlohmann::json::parse(line);
    const std::string cmd = req.at("cmd");
    if (cmd == "reset") {
      std::cout << R"({"ok":true})" << std::endl;
    } else if (mode == "wrong-type") {
      std::cout << R"({"reward":"high"})" << std::endl;
    } else {
      std::cout << nlohmann::json{{"reward", req.at("params").at(0).get<double>()}}.dump() << std::endl;
    }
    ++served;
  }
  return 0;
}
