#!/usr/bin/env python3
"""Writes the HTML license fixtures and their hand-assigned labels.

Each page uses the same skeleton: six top-level body children, so the
<main> block is body (not among the last three) and the final <footer>
is footer by markup.
"""
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "fixtures", "license")

CC = "https://creativecommons.org"


def page(head="", main="", foot="", mid="", lang="nl", charset='<meta charset="utf-8">'):
    return f"""<!DOCTYPE html>
<html lang="{lang}">
<head>
{charset}
<title>Fixture</title>
{head}
</head>
<body>
<header><nav><a href="/">Home</a> <a href="/over">Over ons</a></nav></header>
<main>
<h1>Artikel</h1>
<p>De gemeenteraad vergaderde gisteren over de begroting voor het komende jaar.</p>
{main}
</main>
<aside><p>Lees ook andere berichten.</p></aside>
<section><p>Reacties zijn gesloten.</p>{mid}</section>
<div class="content-end"><p>Einde van het artikel.</p></div>
<footer><p>Contact: redactie</p>{foot}</footer>
</body>
</html>
"""


def meta(url, name="license"):
    return f'<meta name="{name}" content="{url}">'


def jsonld(url):
    return f'<script type="application/ld+json">{{"@context": "https://schema.org", "@type": "Article", "license": "{url}"}}</script>'


def link(url):
    return f'<link rel="license" href="{url}">'


def anchor(url, text="CC licentie"):
    return f'<a rel="license" href="{url}">{text}</a>'


BY4 = f"{CC}/licenses/by/4.0/"
BYSA3 = f"{CC}/licenses/by-sa/3.0/"
ZERO = f"{CC}/publicdomain/zero/1.0/"
MARK = f"{CC}/publicdomain/mark/1.0/"

# (file, base url, html, family, version, location, conflict, candidates)
FIXTURES = []


def add(name, html, family, version, location, conflict, n, url=None):
    FIXTURES.append((name, url or f"https://www.example.nl/{name}", html, family, version, location, conflict, n))


# every source kind in every reachable location
add("meta_head.html", page(head=meta(BY4)), "by", "4.0", "head", 0, 1)
add("meta_footer.html", page(foot=meta(ZERO)), "zero", "1.0", "footer", 0, 1)
add("meta_body.html", page(main=meta(f"{CC}/licenses/by-nc/4.0/")), "by_nc", "4.0", "body", 0, 1)
add("jsonld_head.html", page(head=jsonld(BYSA3)), "by_sa", "3.0", "head", 0, 1)
add("jsonld_footer.html", page(foot=jsonld(MARK)), "mark", "1.0", "footer", 0, 1)
add("jsonld_body.html", page(main=jsonld(f"{CC}/licenses/by-nd/4.0/")), "by_nd", "4.0", "body", 0, 1)
add("link_head.html", page(head=link(f"{CC}/licenses/by-nc-sa/4.0/")), "by_nc_sa", "4.0", "head", 0, 1)
add("link_footer.html", page(foot=link(f"{CC}/licenses/by-nc-nd/3.0/")), "by_nc_nd", "3.0", "footer", 0, 1)
add("link_body.html", page(main=link(f"{CC}/licenses/by/2.0/")), "by", "2.0", "body", 0, 1)
add("anchor_footer.html", page(foot=anchor(BY4)), "by", "4.0", "footer", 0, 1)
add("anchor_body.html", page(main=anchor(f"{CC}/licenses/by/2.5/")), "by", "2.5", "body", 0, 1)

# alternative location signals
add("anchor_class_footer.html",
    page(main=f'<div class="Site-Footer-Links">{anchor(BY4)}</div>'), "by", "4.0", "footer", 0, 1)
add("anchor_id_footer.html",
    page(main=f'<div id="pagefooter">{anchor(ZERO)}</div>'), "zero", "1.0", "footer", 0, 1)
add("anchor_positional_footer.html", page(mid=anchor(BYSA3)), "by_sa", "3.0", "footer", 0, 1)

# conflicts
add("conflict_meta_vs_anchor.html", page(head=meta(BYSA3), foot=anchor(ZERO)), "by_sa", "3.0", "head", 1, 2)
add("conflict_body_vs_footer.html",
    page(main=anchor(f"{CC}/licenses/by-nc/3.0/"), foot=anchor(BY4)), "by", "4.0", "footer", 1, 2)
add("conflict_three_families.html",
    page(head=link(MARK), main=anchor(f"{CC}/licenses/by-nd/2.0/"), foot=jsonld(BY4)), "by", "4.0", "footer", 1, 3)
add("same_family_versions.html",
    page(head=meta(f"{CC}/licenses/by/3.0/"), foot=anchor(BY4)), "by", "3.0", "head", 0, 2)
add("same_license_twice.html", page(main=anchor(BY4), foot=anchor(BY4, "CC BY 4.0")), "by", "4.0", "footer", 0, 2)

# relative and scheme-relative URLs
add("scheme_relative.html", page(foot=anchor(f"//creativecommons.org/licenses/by/4.0/")), "by", "4.0", "footer", 0, 1)
add("relative_link_offsite.html", page(head=link("/licentie.html")), "-", "-", "-", 0, 1)
add("relative_base_href.html",
    page(head='<base href="https://creativecommons.org/">', foot=anchor("licenses/by-sa/4.0/")),
    "by_sa", "4.0", "footer", 0, 1)
add("relative_on_cc_host.html", page(main=anchor("../licenses/by-nc-sa/2.5/")), "by_nc_sa", "2.5", "body", 0, 1,
    url="https://creativecommons.org/about/page.html")
add("http_and_deed.html", page(foot=anchor("http://creativecommons.org/licenses/by/4.0/deed.nl")),
    "by", "4.0", "footer", 0, 1)
add("jurisdiction_port.html", page(foot=anchor(f"{CC}/licenses/by/3.0/nl/")), "by", "3.0", "footer", 0, 1)

# unparsed candidates falling through to a parsed one
add("unparsed_then_parsed.html",
    page(head=link("https://www.example.nl/voorwaarden"), foot=anchor(ZERO)), "zero", "1.0", "footer", 0, 2)
add("certification_only.html", page(foot=anchor(f"{CC}/certification/")), "-", "-", "-", 0, 1)
add("dc_rights_meta.html", page(head=meta(BY4, name="DC.rights")), "by", "4.0", "head", 0, 1)
add("jsonld_graph.html",
    page(head='<script type="application/ld+json">{"@graph": [{"@type": "WebPage"}, {"@type": "Article", "license": "'
         + ZERO + '"}]}</script>'), "zero", "1.0", "head", 0, 1)

# decoys: license talk without a qualifying node
add("decoy_prose.html",
    page(main="<p>Deze tekst valt onder CC-BY 4.0 en https://creativecommons.org/licenses/by/4.0/ is de link.</p>"),
    "-", "-", "-", 0, 0)
add("decoy_meta_text.html", page(head=meta("CC BY-SA 4.0")), "-", "-", "-", 0, 0)
add("decoy_offsite_anchor.html",
    page(foot='<a href="https://example.org/licenses/by/4.0/">licentie</a>'), "-", "-", "-", 0, 0)
add("decoy_comment.html",
    page(foot="<!-- <a href=\"https://creativecommons.org/licenses/by/4.0/\">CC</a> -->"), "-", "-", "-", 0, 0)
add("decoy_jsonld_nested.html",
    page(head='<script type="application/ld+json">{"author": {"license": "' + BY4 + '"}}</script>'),
    "-", "-", "-", 0, 0)
add("decoy_attribute_text.html",
    page(main='<img src="foto.jpg" alt="https://creativecommons.org/licenses/by/4.0/" title="CC BY">'),
    "-", "-", "-", 0, 0)

# malformed markup
add("malformed_unclosed.html",
    "<html><head><title>x</title><meta name=license content=https://creativecommons.org/licenses/by/4.0/>"
    "<body><p>a<p>b<div><footer><a href=https://creativecommons.org/publicdomain/zero/1.0/>cc0",
    "by", "4.0", "head", 1, 2)
add("latin1_charset.html",
    page(main="<p>Café naïef</p>", foot=anchor(BY4), charset='<meta charset="iso-8859-1">'),
    "by", "4.0", "footer", 0, 1)


def main():
    os.makedirs(OUT, exist_ok=True)
    rows = ["# file\turl\tfamily\tversion\tlocation\tconflict\tcandidates"]
    for name, url, html, family, version, location, conflict, n in FIXTURES:
        enc = "iso-8859-1" if "latin1" in name else "utf-8"
        with open(os.path.join(OUT, name), "wb") as f:
            f.write(html.encode(enc))
        rows.append(f"{name}\t{url}\t{family}\t{version}\t{location}\t{conflict}\t{n}")
    with open(os.path.join(OUT, "labels.tsv"), "w") as f:
        f.write("\n".join(rows) + "\n")
    print(f"{len(FIXTURES)} fixtures")


if __name__ == "__main__":
    main()
