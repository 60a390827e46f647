#pragma once

#include <optional>
#include <string>

#include "phishlens/bytes.hpp"
#include "phishlens/error.hpp"

namespace test {

/// Error code thrown by f(), or nullopt when it returns normally.
template <typename F>
std::optional<phishlens::Errc> error_of(F&& f) {
    try {
        f();
    } catch (const phishlens::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

/// The one-page fixture: catalog, pages, page, content "BT (Hi) Tj ET".
inline std::string minimal_pdf() {
    return "%PDF-1.4\n"
           "1 0 obj\n<< /Type /Catalog /Pages 2 0 R >>\nendobj\n"
           "2 0 obj\n<< /Type /Pages /Kids [3 0 R] /Count 1 >>\nendobj\n"
           "3 0 obj\n<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>\nendobj\n"
           "4 0 obj\n<< /Length 13 >>\nstream\nBT (Hi) Tj ET\nendstream\nendobj\n"
           "trailer\n<< /Root 1 0 R >>\n%%EOF\n";
}

}  // namespace test
