#include <doctest.h>

#include "phishlens/html.hpp"

using namespace phishlens;

namespace {

HtmlFeatures html(std::string_view text, std::optional<std::string> host = std::nullopt) {
    return extract_html(as_bytes(text), host).features;
}

}  // namespace

TEST_CASE("tag counting") {
    const auto f = html("<html><body><form></form></body></html>");
    CHECK(f.tag_count == 3);  // start tags only: html, body, form
    CHECK(f.form_count == 1);
    CHECK(f.iframe_count == 0);
    CHECK(f.unique_tag_count == 3);
    CHECK(f.max_nesting_depth == 3);
    CHECK(html("<p>a<br/><img src=x.png><br></p>").tag_count == 4);
}

TEST_CASE("embedded script") {
    const auto f = html("<script>eval(x)</script>");
    CHECK(f.script_block_count == 1);
    CHECK(f.embedded_js_count == 1);
    CHECK(f.eval_count == 1);
    CHECK(f.total_script_characters == 7);
    CHECK(f.script_entropy == doctest::Approx(shannon_entropy("eval(x)")));

    const auto g = html("<script src=\"/a.js\"></script><script>window.location='/x'</script>");
    CHECK(g.script_block_count == 2);
    CHECK(g.external_script_count == 1);
    CHECK(g.embedded_js_count == 1);
    CHECK(g.location_redirect_count == 1);
    CHECK(g.embedded_js_count <= g.script_block_count);
}

TEST_CASE("script bodies are raw text") {
    const auto f = html("<script>if (a < b) { x = '<div>'; }</script><p>hi</p>");
    CHECK(f.tag_count == 2);
}

TEST_CASE("internal and external links") {
    const auto f = html("<a href=\"https://a.example/x\">x</a><a href=\"/local\">y</a>", "a.example");
    CHECK(f.external_link_count == 0);
    CHECK(f.internal_link_count == 2);
    CHECK(f.min_link_length == 6);
    CHECK(f.max_link_length == 19);

    const auto g = html("<a href=\"https://b.example/x\">x</a><a href=\"/local\">y</a>", "www.a.example");
    CHECK(g.external_link_count == 1);
    CHECK(g.internal_link_count == 1);

    const auto based = html("<base href=\"https://a.example/\"><a href=\"https://a.example/q\">x</a>");
    CHECK(based.internal_link_count == 1);

    const auto hostless = html("<a href=\"https://a.example/q\">x</a><a href=\"rel.html\">y</a>");
    CHECK(hostless.internal_link_count == 1);
    CHECK(hostless.external_link_count == 1);
}

TEST_CASE("hidden iframes") {
    auto f = html("<iframe width=\"0\" height=\"0\">");
    CHECK(f.iframe_count == 1);
    CHECK(f.hidden_iframe_count == 1);
    f = html("<iframe src=\"x\" style=\"display: none\"></iframe><iframe src=\"y\" width=\"600\" height=\"400\"></iframe>");
    CHECK(f.iframe_count == 2);
    CHECK(f.hidden_iframe_count == 1);
    CHECK(f.hidden_iframe_count <= f.iframe_count);
}

TEST_CASE("URL-free page and projection") {
    const auto f = html("<html><body><p>plain words only</p></body></html>");
    CHECK(f.url_count == 0);
    CHECK(f.url_punct_char_count == 0);
    CHECK(f.min_link_length == 0);
    auto top = project_top13_html(f);
    REQUIRE(top.size() == 13);
    const std::vector<std::string> expected{"url_punct_char_count", "tag_count", "whitespace_ratio", "entropy",
                                            "form_count", "embedded_js_count", "html_whitespace_ratio",
                                            "script_entropy", "min_link_length", "external_link_count",
                                            "total_script_characters", "internal_link_count", "url_digit_count"};
    CHECK(top.schema().columns() == expected);
    CHECK(html_schema()->size() == 40);
}

TEST_CASE("digits and punctuation in URLs") {
    const auto a = html("<a href=\"https://x.test/p?id=12\">l</a>");
    const auto b = html("<a href=\"https://x.test/p?id=123\">l</a>");
    CHECK(b.url_digit_count == a.url_digit_count + 1);
    CHECK(a.url_punct_char_count == 7);  // : / / . / ? =
}

TEST_CASE("link statistics") {
    const auto f = html("<a href=\"/a\">a</a><img src=\"/images/photo.png\"><div style=\"background:url(/bg.gif)\"></div>"
                        "<form action=\"http://192.168.1.5/post\"></form><a href=\"https://bit.ly/x\">s</a>");
    CHECK(f.url_count == 5);
    CHECK(f.internal_link_count + f.external_link_count == 3);
    CHECK(f.min_link_length <= f.avg_link_length);
    CHECK(f.avg_link_length <= f.max_link_length);
    CHECK(f.ip_url_count == 1);
    CHECK(f.shortener_url_count == 1);
    CHECK(f.img_tag_count == 1);
}

TEST_CASE("keywords, obfuscation and events") {
    const auto f = html("<p>Please LOGIN to verify your account</p><!-- login -->"
                        "<script>var s = \"\\x41\\u0042%u0043\"; var b = \"QUJDREVGR0hJSktMTU5PUFFSU1RVVldY\";</script>"
                        "<body onload=\"go()\" onclick=\"x()\"><meta http-equiv=\"refresh\" content=\"0;url=/x\">"
                        "<noscript>n</noscript><object data=\"a.swf\"></object>");
    CHECK(f.suspicious_keyword_count == 3);
    CHECK(f.keyword_text_ratio > 0);
    CHECK(f.hex_escape_count == 1);
    CHECK(f.js_escape_count == 2);
    CHECK(f.base64_occurrence_count == 1);
    CHECK(f.event_handler_count == 2);
    CHECK(f.meta_refresh_count == 1);
    CHECK(f.comment_count == 1);
    CHECK(f.noscript_count == 1);
    CHECK(f.object_tag_count == 1);
}

TEST_CASE("whitespace ratios stay in range") {
    for (const char* doc : {"", "   ", "<p> </p>", "<a>b</a>", "text only", "<<<>>>\n\n\t"}) {
        const auto f = html(doc);
        CHECK(f.whitespace_ratio >= 0);
        CHECK(f.whitespace_ratio <= 1);
        CHECK(f.html_whitespace_ratio >= 0);
        CHECK(f.html_whitespace_ratio <= 1);
    }
}

TEST_CASE("malformed markup is tolerated") {
    for (const char* doc : {"<", "<a href=\"", "<script>", "<!--", "<div <p>>", "</x></y>", "<a href='x'>", "&amp;&#x41;"}) {
        const auto a = extract_html(as_bytes(doc));
        CHECK(a.features.to_vector().size() == 40);
    }
}
