/** The bundled demo instance: four chemicals, three symptom queries. */

export const toyInstance = {
    queries: ["fever", "nausea", "rash"],
    objects: [
        { name: "theta1", prior: 0.25, group: 1, responses: [0, 1, 1] },
        { name: "theta2", prior: 0.25, group: 1, responses: [1, 1, 0] },
        { name: "theta3", prior: 0.25, group: 1, responses: [0, 1, 0] },
        { name: "theta4", prior: 0.25, group: 2, responses: [1, 0, 0] },
    ],
};
