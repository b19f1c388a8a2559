package fixtures;

interface Marker {
}
