#pragma once

// Frozen output of tests/oracles/tfidf_oracle.py over tests/data/ten_subjects.txt.
// Regenerate with: python3 tests/oracles/tfidf_oracle.py tests/data/ten_subjects.txt

#include <array>
#include <string_view>
#include <vector>

namespace crosshunt::testing {

inline constexpr std::array<std::string_view, 10> kTenSubjectLabels = {
    R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell -noP -w 1)",
    R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell.exe -NoP -NonI -w)",
    R"(C:\Windows\System32\cmd.exe /c whoami)",
    R"(C:\Windows\System32\cmd.exe /c ping 10.0.0.5)",
    R"(C:\Windows\System32\net.exe user administrator)",
    R"(C:\Windows\System32\conhost.exe 0xffffffff -ForceV1)",
    R"(C:\Windows\System32\svchost.exe -k netsvcs -p)",
    R"(C:\Windows\System32\rundll32.exe C:\Windows\System32\comsvcs.dll MiniDump)",
    R"(C:\Windows\System32\WindowsPowerShell\v1.0\PowerShell.exe -enc SQBFAFgA)",
    R"(C:\Windows\System32\tasklist.exe /v)",
};

inline constexpr std::size_t kTenSubjectVocabulary = 33;

inline const std::vector<std::vector<std::string_view>> kTenSubjectCells = {
    {"-nop", "-w", "1", "powershell", "v1.0", "windowspowershell"},
    {"-noni", "-nop", "-w", "powershell.exe", "v1.0", "windowspowershell"},
    {"c", "cmd.exe", "whoami"},
    {"10.0.0.5", "c", "cmd.exe", "ping"},
    {"administrator", "net.exe", "user"},
    {"-forcev1", "0xffffffff", "conhost.exe"},
    {"-k", "-p", "netsvcs", "svchost.exe"},
    {"comsvcs.dll", "minidump", "rundll32.exe"},
    {"-enc", "powershell.exe", "sqbfafga", "v1.0", "windowspowershell"},
    {"tasklist.exe", "v"},
};

inline constexpr std::array<double, 10> kTenSubjectMedians = {
    0.1337747560362151,
    0.1337747560362151,
    0.134119826036175,
    0.22991970177630003,
    0.19188209108283716,
    0.19188209108283716,
    0.32894072757057796,
    0.12792139405522476,
    0.15049660054074201,
    0.0,
};

}  // namespace crosshunt::testing
