#pragma once

// Human-readable run summary: one line per checked identity with its measured residual.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace polariton::io {

struct Check
{
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

class Report
{
public:
    explicit Report(std::string task) : task_(std::move(task)) {}

    // Passes when measured <= tolerance (NaN fails).
    void bound(const std::string &name, double measured, double tolerance, std::string note = {})
    {
        checks_.push_back({name, measured, tolerance, measured <= tolerance, std::move(note)});
    }

    // Passes when the condition holds; measured is reported as-is.
    void require(const std::string &name, bool ok, double measured = 0.0, std::string note = {})
    {
        checks_.push_back({name, measured, 0.0, ok, std::move(note)});
    }

    void info(const std::string &line) { info_.push_back(line); }

    bool all_pass() const
    {
        for (const auto &c : checks_)
            if (!c.pass)
                return false;
        return true;
    }

    std::vector<std::string> failures() const
    {
        std::vector<std::string> out;
        for (const auto &c : checks_)
            if (!c.pass)
                out.push_back(c.name);
        return out;
    }

    const std::vector<Check> &checks() const noexcept { return checks_; }

    std::string text(const std::string &status) const
    {
        std::ostringstream os;
        os << "task: " << task_ << "\n";
        for (const auto &l : info_)
            os << "info: " << l << "\n";
        for (const auto &c : checks_) {
            char buf[96];
            if (c.tolerance > 0.0)
                std::snprintf(buf, sizeof buf, "measured %.3e  tolerance %.1e", c.measured, c.tolerance);
            else
                std::snprintf(buf, sizeof buf, "measured %.6g", c.measured);
            os << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  " << buf;
            if (!c.note.empty())
                os << "  (" << c.note << ")";
            os << "\n";
        }
        os << "result: " << status << "\n";
        return os.str();
    }

private:
    std::string task_;
    std::vector<Check> checks_;
    std::vector<std::string> info_;
};

} // namespace polariton::io
