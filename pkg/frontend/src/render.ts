/** DOM rendering for the session console; re-renders from each FlowView. */

import { BuilderConfigDoc, Mode } from "./api.js";
import { FlowView, LAMBDA_STOPS, SessionFlow, lambdaStopLabel } from "./flow.js";

export interface PickerSelection {
    instanceId: string | null;
    mode: Mode;
    lambdaIndex: number;
    seed: string;
}

export const pickerSelection: PickerSelection = {
    instanceId: null,
    mode: "group",
    lambdaIndex: 0,
    seed: "",
};

export function selectedConfig(): BuilderConfigDoc {
    const config: BuilderConfigDoc = {
        lambda: LAMBDA_STOPS[pickerSelection.lambdaIndex],
        mode: pickerSelection.mode,
    };
    const seed = pickerSelection.seed.trim();
    if (seed !== "") config.tiebreak = { seed: Number(seed) };
    return config;
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

function renderBanner(view: FlowView, flow: SessionFlow): HTMLElement | null {
    if (!view.banner) return null;
    const banner = el("div", "banner", view.banner);
    if (view.canRetry) {
        const retry = el("button", "retry", "Retry");
        retry.onclick = () => void flow.retry();
        banner.appendChild(retry);
    }
    return banner;
}

function renderPicker(view: FlowView, flow: SessionFlow): HTMLElement {
    const panel = el("section", "panel picker");
    panel.appendChild(el("h2", undefined, "Start a session"));

    const select = el("select");
    select.id = "instance-select";
    for (const instance of view.instances) {
        const option = el("option", undefined,
            `${instance.id}  (${instance.objects} objects, ${instance.queries} queries` +
            (instance.groups ? `, ${instance.groups} groups)` : ")"));
        option.value = instance.id;
        select.appendChild(option);
    }
    if (pickerSelection.instanceId) select.value = pickerSelection.instanceId;
    select.onchange = () => { pickerSelection.instanceId = select.value; };
    if (view.instances.length === 0) {
        panel.appendChild(el("p", "hint", "No instances registered yet; upload one below."));
    }
    panel.appendChild(labeled("Instance", select));

    const modeRow = el("div", "mode-row");
    for (const mode of ["object", "group"] as Mode[]) {
        const label = el("label", "mode-option");
        const radio = el("input");
        radio.type = "radio";
        radio.name = "mode";
        radio.value = mode;
        radio.checked = pickerSelection.mode === mode;
        radio.onchange = () => { pickerSelection.mode = mode; };
        label.append(radio, ` identify the ${mode}`);
        modeRow.appendChild(label);
    }
    panel.appendChild(labeled("Mode", modeRow));

    const slider = el("input");
    slider.type = "range";
    slider.id = "lambda-slider";
    slider.min = "0";
    slider.max = String(LAMBDA_STOPS.length - 1);
    slider.step = "1";
    slider.value = String(pickerSelection.lambdaIndex);
    const sliderValue = el("span", "lambda-value",
        lambdaStopLabel(LAMBDA_STOPS[pickerSelection.lambdaIndex]));
    slider.oninput = () => {
        pickerSelection.lambdaIndex = Number(slider.value);
        sliderValue.textContent = lambdaStopLabel(LAMBDA_STOPS[pickerSelection.lambdaIndex]);
    };
    const sliderRow = el("div", "slider-row");
    sliderRow.append(slider, sliderValue);
    panel.appendChild(labeled("Query-cost exponent λ", sliderRow));

    const seed = el("input");
    seed.type = "text";
    seed.placeholder = "optional tie-break seed";
    seed.value = pickerSelection.seed;
    seed.oninput = () => { pickerSelection.seed = seed.value; };
    panel.appendChild(labeled("Tie-break seed", seed));

    const start = el("button", "primary", "Start");
    start.disabled = view.busy || view.instances.length === 0;
    start.onclick = () => {
        const instanceId = pickerSelection.instanceId ?? view.instances[0]?.id;
        if (instanceId) void flow.start(instanceId, selectedConfig());
    };
    panel.appendChild(start);

    const upload = el("input");
    upload.type = "file";
    upload.accept = ".json,application/json";
    upload.onchange = async () => {
        const file = upload.files?.[0];
        if (!file) return;
        let doc: unknown;
        try {
            doc = JSON.parse(await file.text());
        } catch {
            flow.reportError(`${file.name} is not valid JSON`);
            return;
        }
        await flow.registerInstance(doc);
    };
    panel.appendChild(labeled("Upload instance JSON", upload));
    return panel;
}

function labeled(text: string, control: HTMLElement): HTMLElement {
    const row = el("div", "field");
    row.appendChild(el("label", "field-label", text));
    row.appendChild(control);
    return row;
}

function renderCandidates(view: FlowView): HTMLElement {
    const session = view.session!;
    const panel = el("aside", "candidates");
    panel.appendChild(el("h3", undefined,
        `Candidates (${session.remaining.length})`));
    const list = el("ul", "candidate-list");
    session.remaining.forEach((objectIndex, k) => {
        const item = el("li", "candidate");
        const name = el("span", "candidate-name", session.remaining_names[k]);
        const bar = el("div", "bar");
        const fill = el("div", "bar-fill");
        // linear scale with a minimum visible width so unlikely candidates stay visible
        fill.style.width = `${Math.max(1, session.posterior[k] * 100)}%`;
        bar.appendChild(fill);
        const mass = el("span", "candidate-mass", session.posterior[k].toFixed(3));
        item.append(name, bar, mass);
        item.dataset.objectIndex = String(objectIndex);
        list.appendChild(item);
    });
    panel.appendChild(list);
    return panel;
}

function renderQuestion(view: FlowView, flow: SessionFlow): HTMLElement {
    const session = view.session!;
    if (session.status.state !== "awaiting-answer") throw new Error("not awaiting");
    const panel = el("section", "panel question");
    panel.appendChild(el("p", "question-count", `Question ${session.questions_asked + 1}`));
    panel.appendChild(el("h2", "query-name", session.status.query_name));
    const buttons = el("div", "answers");
    const yes = el("button", "primary answer-yes", "Yes");
    yes.disabled = view.busy;
    yes.onclick = () => void flow.answer(1);
    const no = el("button", "primary answer-no", "No");
    no.disabled = view.busy;
    no.onclick = () => void flow.answer(0);
    buttons.append(yes, no);
    panel.appendChild(buttons);

    const wrap = el("div", "question-layout");
    wrap.append(panel, renderCandidates(view));
    return wrap;
}

function renderTranscript(view: FlowView): HTMLElement {
    const session = view.session!;
    const list = el("ol", "transcript");
    for (const item of session.history) {
        list.appendChild(el("li", undefined,
            `${item.query_name} → ${item.bit ? "yes" : "no"}`));
    }
    return list;
}

function renderResult(view: FlowView, flow: SessionFlow): HTMLElement {
    const session = view.session!;
    const panel = el("section", "panel result");
    if (session.status.state === "identified") {
        panel.appendChild(el("h2", undefined,
            `Identified ${session.status.kind}: ${session.status.name}`));
        panel.appendChild(el("p", undefined,
            `after ${session.questions_asked} question(s)`));
    } else if (session.status.state === "failed") {
        panel.appendChild(el("h2", "failure", "Session failed"));
        panel.appendChild(el("p", "failure-reason", session.status.reason));
    }
    panel.appendChild(el("h3", undefined, "Transcript"));
    panel.appendChild(renderTranscript(view));
    const again = el("button", "primary", "Start over");
    again.onclick = () => void flow.restart();
    panel.appendChild(again);
    return panel;
}

export function render(root: HTMLElement, view: FlowView, flow: SessionFlow): void {
    root.replaceChildren();
    const banner = renderBanner(view, flow);
    if (banner) root.appendChild(banner);
    switch (view.screen) {
        case "picker":
            root.appendChild(renderPicker(view, flow));
            break;
        case "question":
            root.appendChild(renderQuestion(view, flow));
            break;
        case "result":
        case "failed":
            root.appendChild(renderResult(view, flow));
            break;
    }
}
