#pragma once

#include <array>
#include <string>
#include <vector>

#include "crosshunt/edge_rules.hpp"

namespace crosshunt::testing {

inline const std::vector<std::string>& syscall_alphabet() {
  static const std::vector<std::string> v{"read",      "write",         "exec",    "fork",   "load",  "create",
                                          "taskstart", "processcreate", "connect", "unlink", "Mystery"};
  return v;
}

inline const std::vector<std::string>& suspiciousness_alphabet() {
  static const std::vector<std::string> v{"Untrusted_Exec", "Untrusted_Read", "Initial_Compromise", "Discovery",
                                          "Credential_Access"};
  return v;
}

struct Endpoints {
  const char* subject;
  const char* object;
};

// Twenty endpoint pairs spanning every prerequisite outcome.
inline constexpr std::array<Endpoints, 20> kEndpoints = {{
    {R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell -noP -w 1)", R"(C:\Users\Public\stage.ps1)"},
    {R"(C:\Windows\System32\WindowsPowerShell\v1.0\powershell.exe -enc AAA)", R"(D:\mods\x.psm1)"},
    {"pwsh powershell", "\"C:\\a b\\conf.PSD1\""},
    {R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell)", R"(C:\Windows\System32\kernel32.dll)"},
    {"powershell", "notes.txt"},
    {"powershell", "script.ps1.bak"},
    {R"(C:\Windows\System32\cmd.exe /c whoami)", R"(C:\Users\Public\stage.ps1)"},
    {R"(C:\Windows\System32\cmd.exe /c whoami)", R"(C:\Windows\System32\ntdll.dll)"},
    {"/usr/bin/python3 run.py", "/usr/lib/libc.so"},
    {"/usr/bin/python3 run.py", "/usr/lib/libssl.so.3"},
    {"/bin/bash -c ls", "/etc/passwd"},
    {"/bin/bash -c ls", "/Library/x.dylib"},
    {"svchost.exe -k netsvcs", "10.0.0.5:445"},
    {"svchost.exe -k netsvcs", "C:\\Windows\\x.DLL"},
    {"explorer.exe", "explorer.exe"},
    {"PING.EXE 10.20.2.66", "10.20.2.66:445"},
    {"reg.exe save HKLM\\SAM sam.hiv", "C:\\Windows\\System32\\config\\SAM"},
    {"rundll32.exe comsvcs.dll MiniDump", "lsass.dmp"},
    {"notpowershell.exe", "a.ps1"},
    {"x", "y.so"},
}};

inline std::vector<EdgeContext> edge_corpus() {
  std::vector<EdgeContext> out;
  for (const auto& sys : syscall_alphabet()) {
    for (const auto& susp : suspiciousness_alphabet()) {
      for (const auto& ep : kEndpoints) out.push_back({sys, susp, ep.subject, ep.object});
    }
  }
  return out;
}

inline const RuleSet& default_rules() {
  static const RuleSet r = RuleSet::defaults();
  return r;
}

inline const RuleSet& disjunctive_rules() {
  static const RuleSet r = [] {
    RuleOptions o;
    o.row5_disjunctive = true;
    o.initial_compromise_exception = true;
    return RuleSet::defaults(o);
  }();
  return r;
}

}  // namespace crosshunt::testing
